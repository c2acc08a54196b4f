#include "floodda/swe/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "floodda/core/error.hpp"

namespace floodda::swe {

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw InputError("table: no samples");
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    if (!std::isfinite(knots_[k].first) || !std::isfinite(knots_[k].second)) {
      throw InputError("table: non-finite sample " + std::to_string(k));
    }
    if (k > 0 && !(knots_[k].first > knots_[k - 1].first)) {
      throw InputError("table: abscissa not strictly increasing at sample " + std::to_string(k));
    }
  }
}

double PiecewiseLinear::operator()(double x) const {
  if (knots_.empty()) return 0.0;
  if (x <= knots_.front().first) return knots_.front().second;
  if (x >= knots_.back().first) return knots_.back().second;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double value, const auto& knot) { return value < knot.first; });
  auto lo = hi - 1;
  if (x == lo->first) return lo->second;
  const double w = (x - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

Hydrograph::Hydrograph(std::vector<std::pair<double, double>> samples) : table_(std::move(samples)) {
  for (const auto& [t, q] : table_.knots()) {
    if (q < 0.0) throw InputError("hydrograph: negative discharge at t=" + std::to_string(t));
  }
}

RatingCurve::RatingCurve(std::vector<std::pair<double, double>> samples) : table_(std::move(samples)) {
  const auto& k = table_.knots();
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i].second < 0.0) throw InputError("rating curve: negative discharge");
    if (i > 0 && k[i].second < k[i - 1].second) {
      throw InputError("rating curve: discharge decreases at sample " + std::to_string(i));
    }
  }
}

}  // namespace floodda::swe
