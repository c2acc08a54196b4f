#include "floodda/enkf/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>

#include "floodda/core/rng.hpp"

namespace floodda::enkf {
namespace {

using uncertainty::ControlVector;
using uncertainty::Ensemble;
using uncertainty::kControlSize;

/// Runs `body(i)` for every member in parallel; rethrows the first failure
/// (lowest member index) as MemberFailure.
template <class Body>
void for_each_member(int cycle, int n_e, Body&& body) {
  std::vector<std::optional<std::string>> failures(static_cast<std::size_t>(n_e));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_e; ++i) {
    try {
      body(i);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  }
  for (int i = 0; i < n_e; ++i) {
    if (failures[i]) {
      std::ostringstream msg;
      msg << "cycle " << cycle << ", member " << i << ": " << *failures[i];
      throw MemberFailure(cycle, i, msg.str());
    }
  }
}

std::vector<double> merged_times(std::vector<double> a, std::span<const double> b, double lo, double hi) {
  for (double t : b) {
    if (t >= lo && t <= hi) a.push_back(t);
  }
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

void CycleWindow::validate() const {
  if (!(t_end > t_start)) throw InputError("cycle window: t_end must follow t_start");
  if (!(t_shift > 0.0 && t_shift <= length())) throw InputError("cycle window: need 0 < t_shift <= T");
  if (!(spinup >= 0.0)) throw InputError("cycle window: spinup must be non-negative");
  if (spinup > t_shift) throw InputError("cycle window: spinup longer than t_shift leaves no restart for the next cycle");
}

Eigen::MatrixXd to_matrix(const Ensemble& ens) {
  Eigen::MatrixXd m(kControlSize, static_cast<Eigen::Index>(ens.size()));
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto x = ens.members[i].to_array();
    for (int k = 0; k < kControlSize; ++k) m(k, static_cast<Eigen::Index>(i)) = x[k];
  }
  return m;
}

CycleResult run_cycle(int cycle, const CycleInputs& in, const Ensemble* previous,
                      std::span<const swe::RiverState> restarts, const CycleWindow& window,
                      std::span<const double> rerun_outputs) {
  window.validate();
  const auto& cfg = in.config;
  const int n_e = cfg.n_e;
  if (n_e < 2) throw InputError("run_cycle: ensemble size must be at least 2");
  if (restarts.size() != 1 && restarts.size() != static_cast<std::size_t>(n_e)) {
    throw InputError("run_cycle: need one common restart or one per member");
  }
  auto restart_of = [&](int i) -> const swe::RiverState& { return restarts.size() == 1 ? restarts[0] : restarts[i]; };

  CycleResult result;
  AnalysisRecord& rec = result.record;
  rec.cycle = cycle;
  rec.window = window;

  // (i) forecast controls
  if (previous == nullptr) {
    rec.forecast_controls = uncertainty::sample_prior(in.prior, n_e, derive_seed(cfg.seed, "prior"));
    rec.resampling_sigma = in.prior.sigma;
  } else {
    if (previous->size() != static_cast<std::size_t>(n_e)) throw InputError("run_cycle: ensemble size changed");
    rec.resampling_sigma = uncertainty::resampling_sigma(*previous, in.prior, cfg.lambda1, cfg.lambda2);
    rec.forecast_controls = uncertainty::resample_around_mean(*previous, in.prior, cfg.lambda1, cfg.lambda2,
                                                              derive_seed(cfg.seed, "resample", cycle));
  }

  // (ii) spin-up + propagation over the window
  GaugeObservationSet obs = in.observations.within(window.t_start, window.t_end);
  obs.tau = cfg.tau;
  obs.bias = cfg.bias;
  if (obs.records.empty()) throw InputError("run_cycle: no observations in cycle " + std::to_string(cycle));
  rec.observations = obs.records;
  const auto n_obs = static_cast<Eigen::Index>(obs.records.size());
  const std::vector<double> obs_times = obs.times();

  rec.y_f.resize(n_obs, n_e);
  for_each_member(cycle, n_e, [&](int i) {
    const ControlVector& x = rec.forecast_controls.members[i];
    auto traj = swe::run(in.scenario, x.friction(), uncertainty::perturb_hydrograph(in.inflow, x), restart_of(i),
                         window.run_start(), window.t_end, obs_times);
    const auto y = observe(traj, in.scenario.grid, obs, cfg.bias_mode);
    for (Eigen::Index k = 0; k < n_obs; ++k) rec.y_f(k, i) = y[k];
  });

  // (iii) analysis
  std::vector<double> y_o(obs.records.size()), sigma(obs.records.size());
  for (std::size_t k = 0; k < obs.records.size(); ++k) {
    y_o[k] = obs.records[k].value;
    sigma[k] = obs.sigma(k);
  }
  rec.sigma_obs = Eigen::Map<const Eigen::VectorXd>(sigma.data(), n_obs);
  rec.y_obs_ens = perturb_observations(y_o, sigma, n_e, derive_seed(cfg.seed, "obs-perturbation", cycle));
  rec.x_f = to_matrix(rec.forecast_controls);
  auto an = analysis(rec.x_f, rec.y_f, rec.y_obs_ens, rec.sigma_obs.array().square().matrix(), cfg.normalization);
  rec.x_a = std::move(an.x_a);
  rec.gain = std::move(an.gain);
  rec.analysis_controls.members.resize(n_e);
  rec.analysis_controls.seeds = rec.forecast_controls.seeds;
  for (int i = 0; i < n_e; ++i) {
    std::array<double, kControlSize> x{};
    for (int k = 0; k < kControlSize; ++k) x[k] = rec.x_a(k, i);
    rec.analysis_controls.members[i] = ControlVector::from_array(x).clipped();
  }

  // (iv) analyzed rerun from the same initial state
  const double t_next = window.next_restart_time();
  const auto outputs = merged_times({t_next}, rerun_outputs, window.run_start(), window.t_end);
  result.analysis_runs.resize(n_e);
  result.next_restarts.resize(n_e);
  result.end_restarts.resize(n_e);
  for_each_member(cycle, n_e, [&](int i) {
    const ControlVector& x = rec.analysis_controls.members[i];
    auto traj = swe::run(in.scenario, x.friction(), uncertainty::perturb_hydrograph(in.inflow, x), restart_of(i),
                         window.run_start(), window.t_end, outputs);
    result.next_restarts[i] = *traj.at(t_next);
    result.end_restarts[i] = traj.final_state;
    result.analysis_runs[i] = std::move(traj);
  });
  return result;
}

ForecastResult forecast(const swe::Scenario& scenario, const swe::Hydrograph& inflow,
                        std::span<const swe::RiverState> restarts, const uncertainty::Ensemble& analysis,
                        double t_launch, std::span<const double> leads, ForecastInflow mode) {
  const int n_e = static_cast<int>(analysis.size());
  if (restarts.size() != analysis.size()) throw InputError("forecast: one restart per member is required");
  if (n_e == 0) throw InputError("forecast: empty ensemble");
  std::vector<double> times;
  double horizon = t_launch;
  for (double lead : leads) {
    if (lead < 0.0) throw InputError("forecast: negative lead time");
    times.push_back(t_launch + lead);
    horizon = std::max(horizon, t_launch + lead);
  }
  ForecastResult out;
  out.members.resize(n_e);
  for_each_member(-1, n_e, [&](int i) {
    const ControlVector& x = analysis.members[i];
    auto q = uncertainty::perturb_hydrograph(inflow, x);
    if (mode == ForecastInflow::persistence) q = q.held_after(t_launch);
    out.members[i] = swe::run(scenario, x.friction(), q, restarts[i], t_launch, horizon, times);
  });

  std::vector<double> sorted_leads(leads.begin(), leads.end());
  std::sort(sorted_leads.begin(), sorted_leads.end());
  sorted_leads.erase(std::unique(sorted_leads.begin(), sorted_leads.end()), sorted_leads.end());
  for (double lead : sorted_leads) {
    const double t = t_launch + lead;
    for (const auto& st : scenario.grid.stations) {
      double sum = 0.0;
      std::vector<double> z(n_e);
      for (int i = 0; i < n_e; ++i) {
        z[i] = out.members[i].at(t)->free_surface(scenario.grid, st.cell);
        sum += z[i];
      }
      const double mean = sum / n_e;
      double var = 0.0;
      for (double v : z) var += (v - mean) * (v - mean);
      out.stations.push_back({st.name, lead, t, mean, n_e > 1 ? std::sqrt(var / (n_e - 1)) : 0.0});
    }
  }
  return out;
}

}  // namespace floodda::enkf
