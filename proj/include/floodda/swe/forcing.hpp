#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace floodda::swe {

/// Piecewise-linear table with clamped extrapolation; knots strictly
/// increasing in the abscissa.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots);

  double operator()(double x) const;
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }
  bool empty() const noexcept { return knots_.empty(); }

 private:
  std::vector<std::pair<double, double>> knots_;
};

/// Discharge (m3/s) versus time (s).
class Hydrograph {
 public:
  Hydrograph() = default;
  /// Throws InputError unless times are strictly increasing and q >= 0.
  explicit Hydrograph(std::vector<std::pair<double, double>> samples);

  double operator()(double t) const { return table_(t); }
  const std::vector<std::pair<double, double>>& samples() const noexcept { return table_.knots(); }

 private:
  PiecewiseLinear table_;
};

/// Discharge (m3/s) versus free-surface stage (m).
class RatingCurve {
 public:
  RatingCurve() = default;
  /// Throws InputError unless stages strictly increase and q is non-decreasing.
  explicit RatingCurve(std::vector<std::pair<double, double>> samples);

  double operator()(double stage) const { return table_(stage); }
  const std::vector<std::pair<double, double>>& samples() const noexcept { return table_.knots(); }

 private:
  PiecewiseLinear table_;
};

inline double rating_curve_eval(const RatingCurve& rc, double stage) { return rc(stage); }

/// Upstream forcing Q'(t) = max(a * Q(t - c) + b, 0), optionally held constant
/// after `hold_after` (inflow persistence for forecasts).
struct Inflow {
  Hydrograph base;
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double hold_after = std::numeric_limits<double>::infinity();

  double operator()(double t) const {
    const double te = t < hold_after ? t : hold_after;
    const double q = a * base(te - c) + b;
    return q > 0.0 ? q : 0.0;
  }

  Inflow held_after(double t) const {
    Inflow copy = *this;
    copy.hold_after = t;
    return copy;
  }
};

}  // namespace floodda::swe
