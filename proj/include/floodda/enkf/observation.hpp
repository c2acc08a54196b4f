#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "floodda/core/error.hpp"
#include "floodda/swe/solver.hpp"

namespace floodda::enkf {

struct GaugeRecord {
  std::string station;
  double t = 0.0;
  double value = 0.0;  // free-surface elevation (m)
};

/// In-situ water levels with a relative error model sigma = tau * |value| and
/// per-station bias offsets (convention: bias = mean(obs - model)).
struct GaugeObservationSet {
  std::vector<GaugeRecord> records;
  double tau = 0.15;
  std::map<std::string, double> bias;

  double sigma(std::size_t k) const;
  double bias_for(const std::string& station) const;
  /// Records with t0 <= t <= t1, in the original order.
  GaugeObservationSet within(double t0, double t1) const;
  /// Sorted distinct record times.
  std::vector<double> times() const;
};

enum class BiasMode { off, on };

/// Raised for an observation that cannot be mapped onto the model output.
class ObservationError : public Error {
 public:
  ObservationError(std::size_t record, const std::string& what) : Error(what), record_(record) {}
  std::size_t record() const noexcept { return record_; }

 private:
  std::size_t record_;
};

/// Free-surface elevation at one station over time.
struct StationSeries {
  std::string station;
  std::vector<double> t;
  std::vector<double> z;

  /// Linear interpolation; throws InputError outside [t.front(), t.back()].
  double at(double time) const;
};

/// Station series extracted from every recorded state of a trajectory.
std::vector<StationSeries> station_series(const swe::Trajectory& traj, const swe::ScenarioGrid& grid);

/// Model equivalents of `obs`: Z at each record's station cell, linearly
/// interpolated in time between recorded states, plus the station bias when
/// `mode` is on.
std::vector<double> observe(const swe::Trajectory& traj, const swe::ScenarioGrid& grid,
                            const GaugeObservationSet& obs, BiasMode mode);

/// Same operator applied to pre-extracted station series.
std::vector<double> observe(const std::vector<StationSeries>& series, const GaugeObservationSet& obs, BiasMode mode);

/// Per-station time mean of (obs - model) over records in [t0, t1].
/// Throws InputError when no record falls in the window.
std::map<std::string, double> estimate_bias(const std::vector<StationSeries>& model, const GaugeObservationSet& obs,
                                            double t0, double t1);

std::map<std::string, double> estimate_bias(const swe::Trajectory& free_run, const swe::ScenarioGrid& grid,
                                            const GaugeObservationSet& obs, double t0, double t1);

/// n_obs x n_e matrix of y + eps, eps ~ N(0, sigma^2) drawn independently per
/// member (member i uses its own stream derived from `seed`).
Eigen::MatrixXd perturb_observations(const std::vector<double>& y, const std::vector<double>& sigma, int n_e,
                                     std::uint64_t seed);

}  // namespace floodda::enkf
