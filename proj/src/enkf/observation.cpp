#include "floodda/enkf/observation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "floodda/core/rng.hpp"

namespace floodda::enkf {

double GaugeObservationSet::sigma(std::size_t k) const { return tau * std::abs(records[k].value); }

double GaugeObservationSet::bias_for(const std::string& station) const {
  auto it = bias.find(station);
  return it == bias.end() ? 0.0 : it->second;
}

GaugeObservationSet GaugeObservationSet::within(double t0, double t1) const {
  GaugeObservationSet out;
  out.tau = tau;
  out.bias = bias;
  for (const auto& r : records) {
    if (r.t >= t0 && r.t <= t1) out.records.push_back(r);
  }
  return out;
}

std::vector<double> GaugeObservationSet::times() const {
  std::set<double> s;
  for (const auto& r : records) s.insert(r.t);
  return {s.begin(), s.end()};
}

double StationSeries::at(double time) const {
  if (t.empty() || time < t.front() || time > t.back()) {
    std::ostringstream msg;
    msg << "station " << station << ": time " << time << " s outside model output range";
    throw InputError(msg.str());
  }
  auto hi = std::lower_bound(t.begin(), t.end(), time);
  const auto k = static_cast<std::size_t>(hi - t.begin());
  if (*hi == time) return z[k];
  const double w = (time - t[k - 1]) / (t[k] - t[k - 1]);
  return z[k - 1] + w * (z[k] - z[k - 1]);
}

std::vector<StationSeries> station_series(const swe::Trajectory& traj, const swe::ScenarioGrid& grid) {
  std::vector<StationSeries> out;
  for (const auto& st : grid.stations) {
    StationSeries s;
    s.station = st.name;
    for (const auto& state : traj.states) {
      s.t.push_back(state.t);
      s.z.push_back(state.free_surface(grid, st.cell));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> observe(const std::vector<StationSeries>& series, const GaugeObservationSet& obs, BiasMode mode) {
  std::vector<double> y(obs.records.size());
  for (std::size_t k = 0; k < obs.records.size(); ++k) {
    const auto& rec = obs.records[k];
    auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.station == rec.station; });
    if (it == series.end()) {
      throw ObservationError(k, "observation " + std::to_string(k) + ": unknown station " + rec.station);
    }
    if (it->t.empty() || rec.t < it->t.front() || rec.t > it->t.back()) {
      std::ostringstream msg;
      msg << "observation " << k << " (" << rec.station << ", t=" << rec.t << " s) outside model output range";
      throw ObservationError(k, msg.str());
    }
    y[k] = it->at(rec.t);
    if (mode == BiasMode::on) y[k] += obs.bias_for(rec.station);
  }
  return y;
}

std::vector<double> observe(const swe::Trajectory& traj, const swe::ScenarioGrid& grid,
                            const GaugeObservationSet& obs, BiasMode mode) {
  return observe(station_series(traj, grid), obs, mode);
}

std::map<std::string, double> estimate_bias(const std::vector<StationSeries>& model, const GaugeObservationSet& obs,
                                            double t0, double t1) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& rec : obs.records) {
    if (rec.t < t0 || rec.t > t1) continue;
    auto it = std::find_if(model.begin(), model.end(), [&](const auto& s) { return s.station == rec.station; });
    if (it == model.end()) continue;
    auto& [sum, n] = acc[rec.station];
    sum += rec.value - it->at(rec.t);
    ++n;
  }
  if (acc.empty()) throw InputError("estimate_bias: no observations in the calibration window");
  std::map<std::string, double> bias;
  for (const auto& [station, sn] : acc) bias[station] = sn.first / sn.second;
  return bias;
}

std::map<std::string, double> estimate_bias(const swe::Trajectory& free_run, const swe::ScenarioGrid& grid,
                                            const GaugeObservationSet& obs, double t0, double t1) {
  return estimate_bias(station_series(free_run, grid), obs, t0, t1);
}

Eigen::MatrixXd perturb_observations(const std::vector<double>& y, const std::vector<double>& sigma, int n_e,
                                     std::uint64_t seed) {
  if (y.size() != sigma.size()) throw InputError("perturb_observations: y and sigma differ in length");
  const auto n_obs = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd out(n_obs, n_e);
  for (int i = 0; i < n_e; ++i) {
    Rng rng = make_rng(seed, "member", static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index k = 0; k < n_obs; ++k) {
      if (sigma[k] < 0.0) throw InputError("perturb_observations: negative sigma");
      out(k, i) = y[k] + sigma[k] * normal(rng);
    }
  }
  return out;
}

}  // namespace floodda::enkf
