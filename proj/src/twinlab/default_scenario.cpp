#include "floodda/twinlab/default_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "floodda/core/error.hpp"

namespace floodda::twinlab {
namespace {

double pulse(double t, double onset, double t_peak, double amplitude, double shape) {
  const double s = t - onset;
  if (s <= 0.0 || amplitude == 0.0) return 0.0;
  const double r = s / (t_peak - onset);
  return amplitude * std::pow(r, shape) * std::exp(shape * (1.0 - r));
}

}  // namespace

double EventHydrograph::operator()(double t) const {
  double q = base + pulse(t, onset, t_peak, peak - base, shape);
  // The second pulse has the same rise time as the first, shifted in time.
  if (second_peak) q += pulse(t, t_second_peak - (t_peak - onset), t_second_peak, *second_peak - base, shape);
  return q;
}

swe::Hydrograph EventHydrograph::sampled() const {
  if (!(sample_dt > 0.0 && duration > 0.0)) throw InputError("event hydrograph: duration and sample_dt must be positive");
  if (!(t_peak > onset)) throw InputError("event hydrograph: peak must follow onset");
  if (second_peak && !(t_second_peak > t_peak)) throw InputError("event hydrograph: second peak must follow the first");
  std::vector<std::pair<double, double>> s;
  const auto n = static_cast<long>(std::ceil(duration / sample_dt - 1e-9));
  for (long k = 0; k <= n; ++k) {
    const double t = std::min(static_cast<double>(k) * sample_dt, duration);
    s.emplace_back(t, (*this)(t));
  }
  return swe::Hydrograph(std::move(s));
}

swe::RatingCurve uniform_flow_rating(const swe::ScenarioGrid& g, const swe::FrictionSet& f, double slope) {
  double z_lo = std::numeric_limits<double>::infinity();
  for (int c : g.downstream_cells) z_lo = std::min(z_lo, g.z_b[c]);
  std::vector<std::pair<double, double>> knots;
  const double step = 0.1;
  for (int k = 0; k <= 120; ++k) {
    const double stage = z_lo + k * step;
    double q = 0.0;
    for (int c : g.downstream_cells) {
      const double h = std::max(stage - g.z_b[c], 0.0);
      q += g.dy * h * f.ks[g.friction_zone[c]] * std::cbrt(h * h) * std::sqrt(slope);
    }
    knots.emplace_back(stage, q);
  }
  return swe::RatingCurve(std::move(knots));
}

ScenarioBundle build_default_scenario(const DefaultScenarioOptions& o) {
  if (o.nx < 8 || o.ny < 3) throw InputError("default scenario: grid too small");
  if (o.channel_row_lo < 1 || o.channel_row_hi >= o.ny - 1 || o.channel_row_lo > o.channel_row_hi) {
    throw InputError("default scenario: channel rows must leave floodplain on both sides");
  }
  ScenarioBundle b;
  auto& g = b.scenario.grid;
  g.nx = o.nx;
  g.ny = o.ny;
  g.dx = g.dy = o.cell;
  const auto n = static_cast<std::size_t>(g.cell_count());
  g.z_b.resize(n);
  g.friction_zone.resize(n);
  g.exclusion.assign(n, 0);
  const double length = o.nx * o.cell;
  for (int j = 0; j < g.ny; ++j) {
    const bool bed = j >= o.channel_row_lo && j <= o.channel_row_hi;
    const int away = j < o.channel_row_lo ? o.channel_row_lo - j : j - o.channel_row_hi;
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index(i, j);
      const double x = (i + 0.5) * o.cell;
      double z = o.slope * (length - x);
      if (bed) {
        g.friction_zone[k] = static_cast<std::uint8_t>(1 + std::min(2, 3 * i / g.nx));
      } else {
        const double wobble = std::sin(0.9 * i + 1.7 * j) * std::cos(0.37 * i - 0.6 * j);
        z += o.bank_height + o.lateral_rise * (away - 1) + o.relief * wobble;
        g.friction_zone[k] = 0;
      }
      g.z_b[k] = z;
    }
  }
  const int mid_row = o.channel_row_lo;
  g.stations = {{"upper", g.index(g.nx / 4, mid_row)},
                {"middle", g.index(g.nx / 2, mid_row)},
                {"lower", g.index(3 * g.nx / 4, mid_row)}};
  for (int j = o.channel_row_lo; j <= o.channel_row_hi; ++j) g.upstream_cells.push_back(g.index(0, j));
  for (int j = 0; j < g.ny; ++j) g.downstream_cells.push_back(g.index(g.nx - 1, j));
  g.validate();

  const auto friction = o.prior_mean.friction();
  b.scenario.inflow = o.event.sampled();
  b.scenario.rating = uniform_flow_rating(g, friction, o.slope);

  // Initial guess: bed cells at uniform-flow depth for the base flow.
  const int bed_rows = o.channel_row_hi - o.channel_row_lo + 1;
  const double width = bed_rows * o.cell;
  const double ks_bed = friction.ks[2];
  const double h0 = std::pow(o.event.base / (width * ks_bed * std::sqrt(o.slope)), 0.6);
  swe::RiverState guess = swe::RiverState::at_rest(g, -1e9, 0.0);
  for (int j = o.channel_row_lo; j <= o.channel_row_hi; ++j)
    for (int i = 0; i < g.nx; ++i) guess.h[g.index(i, j)] = h0;
  const swe::Inflow base_flow{swe::Hydrograph({{0.0, o.event.base}})};
  auto traj = swe::run(b.scenario, friction, base_flow, guess, 0.0, o.initial_spinup, {});
  b.initial = traj.final_state;
  b.initial.t = o.t_initial;
  return b;
}

}  // namespace floodda::twinlab
