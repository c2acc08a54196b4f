#pragma once

#include <optional>

#include "floodda/twinlab/scenario_io.hpp"
#include "floodda/uncertainty/control.hpp"

namespace floodda::twinlab {

/// Gamma-shaped flood pulse(s) over a constant base flow:
///   Q(t) = base + sum_k (peak_k - base) (s/s_k)^shape exp(shape (1 - s/s_k)),
/// with s = t - onset_k and s_k = t_peak_k - onset_k. A second pulse with the
/// same rise time is added when `second_peak` is set.
struct EventHydrograph {
  double base = 600.0;
  double peak = 3600.0;
  double onset = 43200.0;
  double t_peak = 93600.0;
  double shape = 4.0;
  std::optional<double> second_peak;
  double t_second_peak = 151200.0;
  double duration = 172800.0;
  double sample_dt = 900.0;

  double operator()(double t) const;
  swe::Hydrograph sampled() const;
};

/// Straight sloped channel with an incised river bed between two floodplain
/// strips. Zone 0 is the floodplain, zones 1-3 split the bed into upstream,
/// middle and downstream thirds. Stations sit in the bed at 1/4, 1/2 and 3/4
/// of the length.
struct DefaultScenarioOptions {
  int nx = 80;
  int ny = 8;
  double cell = 250.0;
  double slope = 2e-4;
  int channel_row_lo = 3;
  int channel_row_hi = 4;
  double bank_height = 3.0;      // floodplain edge above the bed (m)
  double lateral_rise = 1.0;     // floodplain rise per row away from the bed (m)
  double relief = 0.4;           // deterministic micro-relief amplitude (m)
  EventHydrograph event;
  double t_initial = -43200.0;   // time the initial state is valid at
  double initial_spinup = 86400.0;
  uncertainty::ControlVector prior_mean{};
};

/// Builds the scenario and spins the initial state up to steady base flow
/// under the prior-mean controls.
ScenarioBundle build_default_scenario(const DefaultScenarioOptions& opt = {});

/// Rating curve from uniform flow across the downstream column.
swe::RatingCurve uniform_flow_rating(const swe::ScenarioGrid& grid, const swe::FrictionSet& friction, double slope);

}  // namespace floodda::twinlab
