#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "floodda/enkf/analysis.hpp"
#include "floodda/enkf/observation.hpp"
#include "floodda/swe/solver.hpp"
#include "floodda/uncertainty/control.hpp"

namespace floodda::enkf {

/// Assimilation window [t_start, t_end]. Member integrations begin `spinup`
/// seconds before t_start; the restart for the next cycle is taken at
/// t_start + t_shift - spinup so that the next spin-up starts from it.
struct CycleWindow {
  double t_start = 0.0;
  double t_end = 43200.0;
  double t_shift = 21600.0;
  double spinup = 10800.0;

  double length() const noexcept { return t_end - t_start; }
  double run_start() const noexcept { return t_start - spinup; }
  double next_restart_time() const noexcept { return t_start + t_shift - spinup; }
  CycleWindow next() const noexcept { return {t_start + t_shift, t_end + t_shift, t_shift, spinup}; }
  void validate() const;
};

struct CycleConfig {
  int n_e = 24;
  double tau = 0.15;
  BiasMode bias_mode = BiasMode::off;
  std::map<std::string, double> bias;
  double lambda1 = 0.3;
  double lambda2 = 0.7;
  CovarianceNormalization normalization = CovarianceNormalization::ensemble_size;
  std::uint64_t seed = 0;
};

/// Everything the analysis step of one cycle saw and produced.
struct AnalysisRecord {
  int cycle = 0;
  CycleWindow window;
  uncertainty::Ensemble forecast_controls;
  uncertainty::Ensemble analysis_controls;       // clipped, used for the rerun
  std::array<double, uncertainty::kControlSize> resampling_sigma{};  // spread the forecast draw used
  std::vector<GaugeRecord> observations;
  Eigen::VectorXd sigma_obs;
  Eigen::MatrixXd x_f;        // n x N_e
  Eigen::MatrixXd y_f;        // n_obs x N_e
  Eigen::MatrixXd y_obs_ens;  // n_obs x N_e
  Eigen::MatrixXd x_a;        // n x N_e, before clipping
  Eigen::MatrixXd gain;       // n x n_obs
};

struct CycleResult {
  AnalysisRecord record;
  std::vector<swe::RiverState> next_restarts;  // at window.next_restart_time()
  std::vector<swe::RiverState> end_restarts;   // at t_end
  std::vector<swe::Trajectory> analysis_runs;  // analyzed reruns, states at the requested output times
};

/// A member integration failed; the whole cycle is aborted.
class MemberFailure : public Error {
 public:
  MemberFailure(int cycle, int member, const std::string& what) : Error(what), cycle_(cycle), member_(member) {}
  int cycle() const noexcept { return cycle_; }
  int member() const noexcept { return member_; }

 private:
  int cycle_;
  int member_;
};

/// Inputs shared by every cycle of one experiment.
struct CycleInputs {
  const swe::Scenario& scenario;
  const swe::Hydrograph& inflow;  // nominal hydrograph before perturbation
  const uncertainty::ControlPrior& prior;
  const GaugeObservationSet& observations;
  const CycleConfig& config;
};

/// One forecast/analysis cycle.
///
/// `previous` is null for the first cycle (controls drawn from the prior) and
/// the previous analysis otherwise (controls resampled around its mean).
/// `restarts` holds either one common initial state or one state per member,
/// all valid at window.run_start(). `rerun_outputs` are extra times recorded
/// by the analyzed reruns.
CycleResult run_cycle(int cycle, const CycleInputs& in, const uncertainty::Ensemble* previous,
                      std::span<const swe::RiverState> restarts, const CycleWindow& window,
                      std::span<const double> rerun_outputs);

/// How the upstream discharge is extended past the forecast launch time.
enum class ForecastInflow { persistence, known };

struct StationForecast {
  std::string station;
  double lead = 0.0;
  double t = 0.0;
  double z_mean = 0.0;
  double z_std = 0.0;
};

struct ForecastResult {
  std::vector<swe::Trajectory> members;
  std::vector<StationForecast> stations;  // ordered by lead, then station
};

/// Integrates every member from its restart at t_launch with its analyzed
/// controls held constant, reporting ensemble mean/std at the stations for
/// each lead time.
ForecastResult forecast(const swe::Scenario& scenario, const swe::Hydrograph& inflow,
                        std::span<const swe::RiverState> restarts, const uncertainty::Ensemble& analysis,
                        double t_launch, std::span<const double> leads, ForecastInflow mode);

/// Control ensemble as an n x N_e matrix.
Eigen::MatrixXd to_matrix(const uncertainty::Ensemble& ens);

}  // namespace floodda::enkf
