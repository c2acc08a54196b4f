#include "floodda/experiment/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "floodda/core/ascii_grid.hpp"
#include "floodda/core/csv.hpp"
#include "floodda/core/hash.hpp"
#include "floodda/core/rng.hpp"
#include "floodda/swe/restart.hpp"
#include "floodda/twinlab/twin.hpp"
#include "floodda/uncertainty/control_json.hpp"

namespace floodda::experiment {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using uncertainty::kControlNames;
using uncertainty::kControlSize;

constexpr const char* kVersion = "floodda 0.1.0";

std::string two_digits(int k) {
  std::ostringstream s;
  s << std::setw(2) << std::setfill('0') << k;
  return s.str();
}

std::string cycle_dir(int c) { return "cycles/cycle_" + two_digits(c); }
std::string mask_file(std::size_t k) { return "masks/mask_" + two_digits(static_cast<int>(k)) + ".asc"; }
std::string contingency_file(std::size_t k) {
  return "contingency/contingency_" + two_digits(static_cast<int>(k)) + ".asc";
}

/// Everything an experiment reads besides its configuration.
struct Inputs {
  twinlab::ScenarioBundle model;
  twinlab::AssetHashes scenario_hashes;
  twinlab::ObservationProducts obs;
  std::map<std::string, double> bias;
  std::vector<double> record_times;  // gauge record times and overpasses
};

Inputs load_inputs(const ExperimentConfig& cfg) {
  Inputs in;
  try {
    in.model = twinlab::read_scenario(cfg.scenario, &in.scenario_hashes);
  } catch (const InputError& e) {
    throw ConfigError("scenario", e.what());
  }
  try {
    in.obs = twinlab::read_observations(cfg.observations, in.model.scenario.grid);
  } catch (const InputError& e) {
    throw ConfigError("observations", e.what());
  }
  if (in.obs.gauges.records.empty()) throw ConfigError("observations", "no gauge records");
  if (cfg.bias_correction) {
    try {
      in.bias = read_bias_csv(cfg.bias_file);
    } catch (const InputError& e) {
      throw ConfigError("bias_file", e.what());
    }
    for (const auto& s : in.model.scenario.grid.stations) {
      if (!in.bias.count(s.name)) throw ConfigError("bias_file", "no bias for station " + s.name);
    }
  }
  try {
    in.model.scenario.grid.station(cfg.peak_station);
  } catch (const InputError& e) {
    throw ConfigError("peak_station", e.what());
  }
  std::set<double> times;
  for (const auto& r : in.obs.gauges.records) times.insert(r.t);
  times.insert(in.obs.overpass_times.begin(), in.obs.overpass_times.end());
  in.record_times.assign(times.begin(), times.end());
  if (in.record_times.front() < in.model.initial.t) {
    throw ConfigError("observations", "records precede the scenario initial time");
  }
  return in;
}

double bias_of(const Inputs& in, const std::string& station) {
  const auto it = in.bias.find(station);
  return it == in.bias.end() ? 0.0 : it->second;
}

/// Accumulates station series and overpass masks over the times an
/// experiment covers.
struct Reanalysis {
  std::ostringstream stations;
  std::map<std::size_t, metrics::FloodMask> masks;

  Reanalysis() { stations << "station,t,z_mean,z_std,z_equivalent\n"; }
};

void record_ensemble(Reanalysis& out, const Inputs& in, const std::vector<const swe::RiverState*>& members,
                     double t) {
  const auto& grid = in.model.scenario.grid;
  const double n = static_cast<double>(members.size());
  for (const auto& st : grid.stations) {
    double sum = 0.0;
    for (const auto* s : members) sum += s->free_surface(grid, st.cell);
    const double mean = sum / n;
    double var = 0.0;
    for (const auto* s : members) var += (s->free_surface(grid, st.cell) - mean) * (s->free_surface(grid, st.cell) - mean);
    const double sd = members.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    out.stations << st.name << ',' << csv::format(t) << ',' << csv::format(mean) << ',' << csv::format(sd) << ','
                 << csv::format(mean + bias_of(in, st.name)) << '\n';
  }
  for (std::size_t k = 0; k < in.obs.overpass_times.size(); ++k) {
    if (in.obs.overpass_times[k] != t) continue;
    swe::RiverState mean_state = *members.front();
    for (std::size_t c = 0; c < mean_state.h.size(); ++c) {
      double sum = 0.0;
      for (const auto* s : members) sum += s->h[c];
      mean_state.h[c] = sum / n;
    }
    out.masks[k] = metrics::rasterize_flood_mask(mean_state, grid);
  }
}

void write_reanalysis(const fs::path& dir, const Reanalysis& r, const Inputs& in) {
  csv::write_text(dir / "stations.csv", r.stations.str());
  for (const auto& [k, mask] : r.masks) twinlab::write_mask(dir / mask_file(k), mask, in.model.scenario.grid);
}

std::string controls_header() {
  std::string h = "cycle,member";
  for (auto name : kControlNames) h += "," + std::string(name);
  return h + "\n";
}

void write_controls(std::ostream& out, int cycle, const Eigen::MatrixXd& x) {
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    out << cycle << ',' << i;
    for (Eigen::Index k = 0; k < x.rows(); ++k) out << ',' << csv::format(x(k, i));
    out << '\n';
  }
}

void write_inflow_ensemble(std::ostream& out, const char* stage, const uncertainty::Ensemble& ens,
                           const swe::Hydrograph& q, const enkf::CycleWindow& w) {
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto inflow = uncertainty::perturb_hydrograph(q, ens.members[i]);
    for (double t = w.run_start(); t <= w.t_end + 1e-6; t += 900.0) {
      out << stage << ',' << i << ',' << csv::format(t) << ',' << csv::format(inflow(t)) << '\n';
    }
  }
}

void write_cycle(const fs::path& dir, const enkf::CycleResult& res, const Inputs& in, double lambda2,
                 const uncertainty::ControlPrior& prior) {
  const auto& rec = res.record;
  const auto& grid = in.model.scenario.grid;
  {
    std::ostringstream f, a;
    f << controls_header();
    a << controls_header();
    write_controls(f, rec.cycle, rec.x_f);
    write_controls(a, rec.cycle, rec.x_a);
    csv::write_text(dir / "controls_forecast.csv", f.str());
    csv::write_text(dir / "controls_analysis.csv", a.str());
  }
  {
    std::ostringstream s;
    s << "component,sigma_c,floor,forecast_std,analysis_std\n";
    const auto fs_ = rec.forecast_controls.stddev();
    const auto as_ = rec.analysis_controls.stddev();
    for (int k = 0; k < kControlSize; ++k) {
      s << kControlNames[k] << ',' << csv::format(rec.resampling_sigma[k]) << ',' << csv::format(lambda2 * prior.sigma[k])
        << ',' << csv::format(fs_[k]) << ',' << csv::format(as_[k]) << '\n';
    }
    csv::write_text(dir / "spread.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "index,station,t,obs,sigma_obs,y_f_mean,innovation\n";
    const Eigen::VectorXd yf_mean = rec.y_f.rowwise().mean();
    for (std::size_t k = 0; k < rec.observations.size(); ++k) {
      const auto& o = rec.observations[k];
      const auto kk = static_cast<Eigen::Index>(k);
      s << k << ',' << o.station << ',' << csv::format(o.t) << ',' << csv::format(o.value) << ','
        << csv::format(rec.sigma_obs(kk)) << ',' << csv::format(yf_mean(kk)) << ','
        << csv::format(o.value - yf_mean(kk)) << '\n';
    }
    csv::write_text(dir / "innovations.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "control";
    for (Eigen::Index k = 0; k < rec.gain.cols(); ++k) s << ",obs_" << k;
    s << '\n';
    for (int r = 0; r < kControlSize; ++r) {
      s << kControlNames[r];
      for (Eigen::Index k = 0; k < rec.gain.cols(); ++k) s << ',' << csv::format(rec.gain(r, k));
      s << '\n';
    }
    csv::write_text(dir / "gain.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "stage,member,t,q\n";
    write_inflow_ensemble(s, "forecast", rec.forecast_controls, in.model.scenario.inflow, rec.window);
    write_inflow_ensemble(s, "analysis", rec.analysis_controls, in.model.scenario.inflow, rec.window);
    csv::write_text(dir / "inflow_ensemble.csv", s.str());
  }
  for (std::size_t i = 0; i < res.next_restarts.size(); ++i) {
    const std::string m = "restarts/member_" + two_digits(static_cast<int>(i));
    swe::write_restart(dir / (m + "_next.rst"), res.next_restarts[i], grid);
    swe::write_restart(dir / (m + "_end.rst"), res.end_restarts[i], grid);
  }
}

void write_forecast(const fs::path& dir, const enkf::ForecastResult& f, const Inputs& in) {
  std::ostringstream s;
  s << "station,lead_s,t,z_mean,z_std,z_equivalent\n";
  for (const auto& r : f.stations) {
    s << r.station << ',' << csv::format(r.lead) << ',' << csv::format(r.t) << ',' << csv::format(r.z_mean) << ','
      << csv::format(r.z_std) << ',' << csv::format(r.z_mean + bias_of(in, r.station)) << '\n';
  }
  csv::write_text(dir / "forecast_stations.csv", s.str());
}

void run_free(const ExperimentConfig& cfg, const Inputs& in, const fs::path& out) {
  const auto& sc = in.model.scenario;
  const auto& x = cfg.prior.mean;
  const auto traj = swe::run(sc, x.friction(), uncertainty::perturb_hydrograph(sc.inflow, x), in.model.initial,
                             in.model.initial.t, in.record_times.back(), in.record_times);
  Reanalysis r;
  for (const auto& s : traj.states) record_ensemble(r, in, {&s}, s.t);
  write_reanalysis(out, r, in);
}

void run_da(const ExperimentConfig& cfg, const Inputs& in, const fs::path& out) {
  const auto& sc = in.model.scenario;
  const auto first = cfg.window(1);
  const auto last = cfg.window(cfg.cycles);
  if (first.run_start() < in.model.initial.t) {
    throw ConfigError("window.t_start", "the first spin-up starts before the scenario initial time");
  }
  if (last.t_end > in.record_times.back()) throw ConfigError("window.cycles", "the last window ends after the observations");
  if (cfg.score_window && (cfg.score_window->first < first.run_start() || cfg.score_window->second > last.t_end)) {
    throw ConfigError("score_window", "extends beyond the span covered by the cycles");
  }

  // Cycle-1 restart: the prior-mean free run carried to the first spin-up.
  std::vector<swe::RiverState> restarts;
  if (first.run_start() > in.model.initial.t) {
    const auto& x = cfg.prior.mean;
    restarts.push_back(swe::run(sc, x.friction(), uncertainty::perturb_hydrograph(sc.inflow, x), in.model.initial,
                                in.model.initial.t, first.run_start(), {})
                           .final_state);
  } else {
    restarts.push_back(in.model.initial);
  }

  enkf::CycleConfig cc;
  cc.n_e = cfg.n_e;
  cc.tau = cfg.tau;
  cc.bias_mode = cfg.bias_correction ? enkf::BiasMode::on : enkf::BiasMode::off;
  cc.bias = in.bias;
  cc.lambda1 = cfg.lambda1;
  cc.lambda2 = cfg.lambda2;
  cc.normalization = cfg.normalization;
  cc.seed = cfg.seed;
  const enkf::CycleInputs ci{sc, sc.inflow, cfg.prior, in.obs.gauges, cc};

  std::ostringstream controls;
  controls << "cycle,stage,member";
  for (auto name : kControlNames) controls << ',' << name;
  controls << '\n';

  Reanalysis r;
  std::optional<uncertainty::Ensemble> previous;
  for (int c = 1; c <= cfg.cycles; ++c) {
    const auto w = cfg.window(c);
    std::vector<double> outputs;
    for (double t : in.record_times) {
      if (t >= w.run_start() && t <= w.t_end) outputs.push_back(t);
    }
    auto res = enkf::run_cycle(c, ci, previous ? &*previous : nullptr, restarts, w, outputs);
    const fs::path dir = out / cycle_dir(c);
    write_cycle(dir, res, in, cfg.lambda2, cfg.prior);
    for (const auto* stage : {"forecast", "analysis"}) {
      const auto& x = std::string(stage) == "forecast" ? res.record.x_f : res.record.x_a;
      for (Eigen::Index i = 0; i < x.cols(); ++i) {
        controls << c << ',' << stage << ',' << i;
        for (int k = 0; k < kControlSize; ++k) controls << ',' << csv::format(x(k, i));
        controls << '\n';
      }
    }

    // Reanalysis: each cycle owns [t_start, next t_start); the first also owns
    // its spin-up and the last runs to its t_end.
    const double lo = c == 1 ? w.run_start() : w.t_start;
    const double hi = c == cfg.cycles ? w.t_end : cfg.window(c + 1).t_start;
    for (double t : outputs) {
      const bool owned = t >= lo && (t < hi || (c == cfg.cycles && t <= hi));
      if (!owned) continue;
      std::vector<const swe::RiverState*> members;
      for (const auto& traj : res.analysis_runs) members.push_back(traj.at(t));
      record_ensemble(r, in, members, t);
    }

    if (cfg.forecast.enabled) {
      const auto f = enkf::forecast(sc, sc.inflow, res.end_restarts, res.record.analysis_controls, w.t_end,
                                    cfg.forecast.leads, cfg.forecast.inflow);
      write_forecast(dir, f, in);
    }
    previous = res.record.analysis_controls;
    restarts = std::move(res.next_restarts);
  }
  csv::write_text(out / "controls.csv", controls.str());
  write_reanalysis(out, r, in);
}

void prepare_output(const fs::path& out) {
  if (fs::exists(out)) {
    if (!fs::is_directory(out)) throw ConfigError("output", out.string() + " is not a directory");
    const bool empty = fs::is_empty(out);
    if (!empty && !fs::exists(out / "manifest.json") && !fs::exists(out / "config.json")) {
      throw ConfigError("output", out.string() + " is not empty and does not hold a previous experiment");
    }
    fs::remove_all(out);
  }
  fs::create_directories(out);
}

/// Station -> (t -> value) from an experiment's stations.csv column.
std::map<std::string, std::map<double, double>> read_station_column(const fs::path& path, const std::string& column) {
  const auto table = csv::read(path);
  const auto is = table.column("station"), it = table.column("t"), iv = table.column(column);
  std::map<std::string, std::map<double, double>> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string ctx = path.string() + " row " + std::to_string(r + 2);
    out[table.rows[r].at(is)][csv::to_double(table.rows[r].at(it), ctx)] = csv::to_double(table.rows[r].at(iv), ctx);
  }
  return out;
}

std::string lead_name(double lead) {
  std::ostringstream s;
  s << "lead_" << static_cast<long long>(std::llround(lead));
  return s.str();
}

void write_scores(const fs::path& path, const std::vector<ScoreRow>& rows) {
  std::ostringstream s;
  s << "experiment,time,metric,value\n";
  for (const auto& r : rows) {
    s << r.experiment << ',' << csv::format(r.time) << ',' << r.metric << ',' << csv::format(r.value) << '\n';
  }
  csv::write_text(path, s.str());
}

void write_contingency_raster(const fs::path& path, const metrics::Contingency& c, const swe::ScenarioGrid& grid) {
  AsciiGrid r;
  r.ncols = grid.nx;
  r.nrows = grid.ny;
  r.xllcorner = grid.x0;
  r.yllcorner = grid.y0;
  r.cellsize = grid.dx;
  r.values.resize(c.raster.size());
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const auto o = c.raster[grid.index(i, j)];
      r.at(i, j) = o == metrics::Outcome::excluded ? r.nodata : static_cast<double>(o);
    }
  }
  write_ascii_grid(path, r);
}

constexpr const char* kLegend =
    "code,outcome,color\n"
    "1,true_positive,#00008b\n"
    "2,true_negative,#add8e6\n"
    "3,false_positive,#ff0000\n"
    "4,false_negative,#ffff00\n";

}  // namespace

std::map<std::string, double> read_bias_csv(const fs::path& path) {
  const auto table = csv::read(path);
  const auto is = table.column("station"), ib = table.column("bias");
  std::map<std::string, double> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double b = csv::to_double(table.rows[r].at(ib), path.string() + " row " + std::to_string(r + 2));
    if (!std::isfinite(b)) throw InputError(path.string() + ": non-finite bias");
    out[table.rows[r].at(is)] = b;
  }
  return out;
}

void write_bias_csv(const fs::path& path, const std::map<std::string, double>& bias) {
  std::ostringstream s;
  s << "station,bias\n";
  for (const auto& [name, b] : bias) s << name << ',' << csv::format(b) << '\n';
  csv::write_text(path, s.str());
}

double observed_peak_time(const std::vector<enkf::GaugeRecord>& records, const std::string& station) {
  const enkf::GaugeRecord* best = nullptr;
  for (const auto& r : records) {
    if (r.station == station && (!best || r.value > best->value)) best = &r;
  }
  if (!best) throw InputError("no observations at station " + station);
  return best->t;
}

void run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.output.empty()) throw ConfigError("output", "required");
  if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);
  const Inputs in = load_inputs(cfg);
  const fs::path out = fs::absolute(cfg.output).lexically_normal();
  prepare_output(out);
  const json echo = config_to_json(cfg, out);
  csv::write_text(out / "config.json", echo.dump(2) + "\n");

  if (cfg.mode == Mode::free_run) {
    run_free(cfg, in, out);
  } else {
    run_da(cfg, in, out);
  }
  score_experiment(out);

  json inputs = {{"scenario", {{"file", echo.at("scenario")}, {"sha256", sha256_file(cfg.scenario)}, {"assets", in.scenario_hashes}}},
                 {"observations", {{"dir", echo.at("observations")}, {"files", sha256_tree(cfg.observations)}}}};
  if (cfg.bias_correction) inputs["bias_file"] = {{"file", echo.at("bias_file")}, {"sha256", sha256_file(cfg.bias_file)}};
  json seeds = {{"master", cfg.seed}};
  if (cfg.mode == Mode::da) {
    seeds["prior"] = derive_seed(cfg.seed, "prior");
    seeds["resample"] = "derive_seed(master, \"resample\", cycle)";
    seeds["obs_perturbation"] = "derive_seed(master, \"obs-perturbation\", cycle)";
  }
  const json manifest = {
      {"format", "floodda-experiment/1"},
      {"version", kVersion},
      {"config", echo},
      {"seeds", seeds},
      {"inputs", inputs},
      {"outputs", sha256_tree(out, "manifest.json")},
  };
  csv::write_text(out / "manifest.json", manifest.dump(2) + "\n");
}

std::map<std::string, double> diagnose_bias(const fs::path& free_run_dir, const fs::path& obs_dir, double t0,
                                            double t1, const fs::path& bias_out) {
  if (!(t1 >= t0)) throw InputError("diagnose-bias: window end precedes its start");
  const auto model = read_station_column(free_run_dir / "stations.csv", "z_mean");
  std::vector<enkf::StationSeries> series;
  for (const auto& [name, values] : model) {
    enkf::StationSeries s{name, {}, {}};
    for (const auto& [t, z] : values) {
      s.t.push_back(t);
      s.z.push_back(z);
    }
    series.push_back(std::move(s));
  }
  enkf::GaugeObservationSet obs;
  obs.records = twinlab::read_gauge_csv(obs_dir / "gauge_obs.csv");
  auto bias = enkf::estimate_bias(series, obs, t0, t1);
  write_bias_csv(bias_out, bias);
  return bias;
}

std::vector<ScoreRow> score_experiment(const fs::path& dir) {
  std::vector<std::string> missing;
  for (const char* f : {"config.json", "stations.csv"}) {
    if (!fs::exists(dir / f)) missing.push_back(f);
  }
  if (!missing.empty()) {
    std::string msg = "score: missing artifacts in " + dir.string() + ":";
    for (const auto& m : missing) msg += " " + m;
    throw InputError(msg);
  }
  json echo;
  {
    std::ifstream in(dir / "config.json");
    echo = json::parse(in);
  }
  const ExperimentConfig cfg = parse_config(echo, dir);
  const Inputs in = load_inputs(cfg);
  const auto& grid = in.model.scenario.grid;
  const auto z_eq = read_station_column(dir / "stations.csv", "z_equivalent");

  // Default scoring window: the span the experiment covers.
  std::pair<double, double> win;
  if (cfg.score_window) {
    win = *cfg.score_window;
  } else if (cfg.mode == Mode::da) {
    win = {cfg.window(1).run_start(), cfg.window(cfg.cycles).t_end};
  } else {
    win = {in.record_times.front(), in.record_times.back()};
  }

  std::vector<ScoreRow> rows;
  auto add = [&](std::optional<double> t, std::string metric, std::optional<double> v) {
    rows.push_back({cfg.name, t, std::move(metric), v});
  };

  for (const auto& st : grid.stations) {
    metrics::SeriesPair p;
    const auto it = z_eq.find(st.name);
    for (const auto& r : in.obs.gauges.records) {
      if (r.station != st.name || r.t < win.first || r.t > win.second) continue;
      if (it == z_eq.end() || !it->second.count(r.t)) {
        missing.push_back("stations.csv:" + st.name + "@" + csv::format(r.t));
        continue;
      }
      p.push(r.t, it->second.at(r.t), r.value);
    }
    if (p.size() == 0) {
      for (const char* m : {"rmse", "maae", "nse"}) add(std::nullopt, std::string(m) + "." + st.name, std::nullopt);
      continue;
    }
    add(std::nullopt, "rmse." + st.name, metrics::rmse(p));
    add(std::nullopt, "maae." + st.name, metrics::maae(p));
    std::optional<double> nse;
    try {
      nse = metrics::nse(p);
    } catch (const InputError&) {
    }
    add(std::nullopt, "nse." + st.name, nse);
  }

  std::vector<std::uint8_t> exclusion = in.obs.exclusion;
  for (std::size_t k = 0; k < exclusion.size(); ++k) exclusion[k] |= grid.exclusion.empty() ? 0 : grid.exclusion[k];
  bool legend = false;
  for (std::size_t k = 0; k < in.obs.overpass_times.size(); ++k) {
    const double t = in.obs.overpass_times[k];
    if (t < win.first || t > win.second) continue;
    if (!fs::exists(dir / mask_file(k))) {
      missing.push_back(mask_file(k));
      continue;
    }
    const auto sim = twinlab::read_mask(dir / mask_file(k), grid);
    const auto c = metrics::contingency(sim, in.obs.masks[k], &exclusion);
    write_contingency_raster(dir / contingency_file(k), c, grid);
    legend = true;
    add(t, "csi", metrics::csi(c.counts));
    add(t, "f1", metrics::f_beta(c.counts, 1.0));
    add(t, "kappa", metrics::kappa(c.counts, cfg.kappa_mode));
    add(t, "tp", static_cast<double>(c.counts.tp));
    add(t, "fp", static_cast<double>(c.counts.fp));
    add(t, "tn", static_cast<double>(c.counts.tn));
    add(t, "fn", static_cast<double>(c.counts.fn));
  }
  if (legend) csv::write_text(dir / "contingency/legend.csv", kLegend);

  if (cfg.mode == Mode::da && cfg.forecast.enabled) {
    const double peak = observed_peak_time(in.obs.gauges.records, cfg.peak_station);
    std::map<std::pair<std::string, double>, double> obs_at;
    for (const auto& r : in.obs.gauges.records) obs_at[{r.station, r.t}] = r.value;
    std::map<double, metrics::SeriesPair> pooled;
    std::map<std::pair<std::string, double>, metrics::SeriesPair> per_station;
    for (int c = 1; c <= cfg.cycles; ++c) {
      const fs::path f = dir / cycle_dir(c) / "forecast_stations.csv";
      if (!fs::exists(f)) {
        missing.push_back(cycle_dir(c) + "/forecast_stations.csv");
        continue;
      }
      const auto table = csv::read(f);
      const auto is = table.column("station"), il = table.column("lead_s"), it = table.column("t"),
                 iz = table.column("z_equivalent");
      for (const auto& row : table.rows) {
        const double t = csv::to_double(row.at(it), f.string());
        if (std::abs(t - peak) > cfg.forecast.peak_halfwidth) continue;
        const auto o = obs_at.find({row.at(is), t});
        if (o == obs_at.end()) continue;
        const double lead = csv::to_double(row.at(il), f.string());
        const double z = csv::to_double(row.at(iz), f.string());
        pooled[lead].push(t, z, o->second);
        per_station[{row.at(is), lead}].push(t, z, o->second);
      }
    }
    for (double lead : cfg.forecast.leads) {
      const auto it = pooled.find(lead);
      add(std::nullopt, "forecast_rmse." + lead_name(lead),
          it == pooled.end() ? std::nullopt : std::optional<double>(metrics::rmse(it->second)));
      for (const auto& st : grid.stations) {
        const auto is = per_station.find({st.name, lead});
        add(std::nullopt, "forecast_rmse." + st.name + "." + lead_name(lead),
            is == per_station.end() ? std::nullopt : std::optional<double>(metrics::rmse(is->second)));
      }
    }
  }

  if (!missing.empty()) {
    std::string msg = "score: missing artifacts in " + dir.string() + ":";
    for (const auto& m : missing) msg += " " + m;
    throw InputError(msg);
  }
  write_scores(dir / "scores.csv", rows);
  return rows;
}

std::vector<ScoreRow> read_scores_csv(const fs::path& path) {
  const auto table = csv::read(path);
  const auto ie = table.column("experiment"), it = table.column("time"), im = table.column("metric"),
             iv = table.column("value");
  std::vector<ScoreRow> rows;
  for (const auto& row : table.rows) {
    ScoreRow r{row.at(ie), std::nullopt, row.at(im), std::nullopt};
    if (row.at(it) != "NA") r.time = csv::to_double(row.at(it), path.string());
    if (row.at(iv) != "NA") r.value = csv::to_double(row.at(iv), path.string());
    rows.push_back(std::move(r));
  }
  return rows;
}

std::optional<double> find_score(const std::vector<ScoreRow>& rows, const std::string& metric,
                                 std::optional<double> time) {
  for (const auto& r : rows) {
    if (r.metric == metric && r.time == time) return r.value;
  }
  return std::nullopt;
}

}  // namespace floodda::experiment
