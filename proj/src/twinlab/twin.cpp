#include "floodda/twinlab/twin.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "floodda/core/ascii_grid.hpp"
#include "floodda/core/csv.hpp"
#include "floodda/core/error.hpp"
#include "floodda/core/hash.hpp"
#include "floodda/core/rng.hpp"
#include "floodda/uncertainty/control_json.hpp"

namespace floodda::twinlab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string mask_name(std::size_t k) {
  std::ostringstream s;
  s << "masks/mask_" << std::setw(2) << std::setfill('0') << k << ".asc";
  return s.str();
}

}  // namespace

void ExtentDegradation::validate() const {
  if (!(flip_prob >= 0.0 && flip_prob < 0.5)) throw InputError("extent.flip_prob must lie in [0, 0.5)");
  if (!(exclusion_fraction >= 0.0 && exclusion_fraction < 1.0)) throw InputError("extent.exclusion_fraction must lie in [0, 1)");
  if (!(threshold >= 0.0)) throw InputError("extent.threshold must be non-negative");
}

std::vector<double> GaugeSampling::times() const {
  if (!(dt > 0.0) || !(t_end >= t_start)) throw InputError("gauges: need dt > 0 and t_end >= t_start");
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double t = t_start + static_cast<double>(k) * dt;
    if (t > t_end + 1e-9 * dt) break;
    out.push_back(t);
  }
  return out;
}

void TwinScenario::validate() const {
  model.scenario.grid.validate();
  extent.validate();
  if (!(gauges.tau >= 0.0)) throw InputError("gauges.tau must be non-negative");
  if (gauges.t_start < model.initial.t) throw InputError("gauges.t_start precedes the scenario initial time");
  for (const auto& [name, value] : truth_bias) {
    model.scenario.grid.station(name);
    if (!std::isfinite(value)) throw InputError("truth_bias." + name + " is not finite");
  }
  for (double t : overpass_times) {
    if (t < gauges.t_start || t > gauges.t_end) throw InputError("overpass time outside the event window");
  }
  for (double ks : truth_control.friction().ks) {
    if (!(ks > 0.0)) throw InputError("truth_control: Strickler coefficients must be positive");
  }
}

TwinScenario read_twin(const fs::path& path, AssetHashes* scenario_hashes) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open twin file " + path.string());
  try {
    const json j = json::parse(in);
    if (j.value("format", std::string{}) != "floodda-twin/1") throw InputError("unsupported twin format");
    TwinScenario tw;
    tw.model = read_scenario(path.parent_path() / j.at("scenario").get<std::string>(), scenario_hashes);
    if (j.contains("truth_control")) tw.truth_control = uncertainty::control_from_json(j.at("truth_control"));
    if (j.contains("truth_bias")) tw.truth_bias = j.at("truth_bias").get<std::map<std::string, double>>();
    if (j.contains("gauges")) {
      const auto& g = j.at("gauges");
      tw.gauges.t_start = g.value("t_start", tw.gauges.t_start);
      tw.gauges.t_end = g.value("t_end", tw.gauges.t_end);
      tw.gauges.dt = g.value("dt", tw.gauges.dt);
      tw.gauges.tau = g.value("tau", tw.gauges.tau);
    }
    tw.overpass_times = j.value("overpass_times", std::vector<double>{});
    if (j.contains("extent")) {
      const auto& e = j.at("extent");
      tw.extent.flip_prob = e.value("flip_prob", tw.extent.flip_prob);
      tw.extent.exclusion_fraction = e.value("exclusion_fraction", tw.extent.exclusion_fraction);
      tw.extent.threshold = e.value("threshold", tw.extent.threshold);
    }
    tw.seed = j.value("seed", std::uint64_t{0});
    tw.validate();
    return tw;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<double> record_times(const GaugeSampling& gauges, const std::vector<double>& overpasses) {
  std::vector<double> t = gauges.times();
  t.insert(t.end(), overpasses.begin(), overpasses.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

swe::Trajectory build_truth(const TwinScenario& tw) {
  tw.validate();
  const auto& m = tw.model;
  const auto times = record_times(tw.gauges, tw.overpass_times);
  return swe::run(m.scenario, tw.truth_control.friction(),
                  uncertainty::perturb_hydrograph(m.scenario.inflow, tw.truth_control), m.initial, m.initial.t,
                  times.back(), times);
}

enkf::GaugeObservationSet generate_gauge_obs(const swe::Trajectory& truth, const swe::ScenarioGrid& grid,
                                             const std::vector<double>& times, double tau,
                                             const std::map<std::string, double>& bias, std::uint64_t seed) {
  if (!(tau >= 0.0)) throw InputError("generate_gauge_obs: tau must be non-negative");
  const auto series = enkf::station_series(truth, grid);
  std::vector<Rng> rngs;
  for (std::size_t s = 0; s < series.size(); ++s) rngs.push_back(make_rng(seed, "gauge-obs", s));
  std::normal_distribution<double> normal(0.0, 1.0);
  enkf::GaugeObservationSet out;
  for (double t : times) {
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double z = series[s].at(t);
      const auto it = bias.find(series[s].station);
      const double offset = it == bias.end() ? 0.0 : it->second;
      const double noise = tau > 0.0 ? tau * std::abs(z) * normal(rngs[s]) : 0.0;
      out.records.push_back({series[s].station, t, z + offset + noise});
    }
  }
  return out;
}

std::vector<std::uint8_t> generate_exclusion(const swe::ScenarioGrid& grid, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw InputError("generate_exclusion: fraction must lie in [0, 1)");
  const int n = grid.cell_count();
  const auto target = static_cast<int>(std::llround(fraction * n));
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
  if (target == 0) return mask;
  Rng rng = make_rng(seed, "exclusion");
  const int patch = std::max(1, target / 4);
  int count = 0;
  std::vector<int> frontier;
  auto push_neighbours = [&](int c) {
    const int i = grid.column_of(c), j = grid.row_of(c);
    if (i > 0) frontier.push_back(c - 1);
    if (i + 1 < grid.nx) frontier.push_back(c + 1);
    if (j > 0) frontier.push_back(c - grid.nx);
    if (j + 1 < grid.ny) frontier.push_back(c + grid.nx);
  };
  while (count < target) {
    std::vector<int> free;
    for (int c = 0; c < n; ++c)
      if (!mask[c]) free.push_back(c);
    const int start = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
    mask[start] = 1;
    ++count;
    int size = 1;
    frontier.clear();
    push_neighbours(start);
    while (size < patch && count < target && !frontier.empty()) {
      const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng);
      const int c = frontier[pick];
      frontier[pick] = frontier.back();
      frontier.pop_back();
      if (mask[c]) continue;
      mask[c] = 1;
      ++count;
      ++size;
      push_neighbours(c);
    }
  }
  return mask;
}

metrics::FloodMask generate_flood_extent_obs(const swe::RiverState& truth, const swe::ScenarioGrid& grid,
                                             const ExtentDegradation& degr,
                                             const std::vector<std::uint8_t>& exclusion, std::uint64_t seed) {
  degr.validate();
  if (!exclusion.empty() && exclusion.size() != static_cast<std::size_t>(grid.cell_count())) {
    throw InputError("generate_flood_extent_obs: exclusion raster size differs from the grid");
  }
  metrics::FloodMask mask = metrics::rasterize_flood_mask(truth, grid, degr.threshold);
  mask.exclusion = exclusion;
  Rng rng = make_rng(seed, "extent-flip");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (mask.excluded(k)) continue;
    if (u(rng) < degr.flip_prob) mask.wet[k] ^= 1;
  }
  return mask;
}

std::vector<enkf::GaugeRecord> read_gauge_csv(const fs::path& path) {
  const auto table = csv::read(path);
  const auto is = table.column("station"), it = table.column("t"), iv = table.column("value");
  std::vector<enkf::GaugeRecord> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string ctx = path.string() + " row " + std::to_string(r + 2);
    const auto& row = table.rows[r];
    out.push_back({row.at(is), csv::to_double(row.at(it), ctx), csv::to_double(row.at(iv), ctx)});
    if (!std::isfinite(out.back().value)) throw InputError(ctx + ": non-finite observation");
  }
  return out;
}

void write_gauge_csv(const fs::path& path, const std::vector<enkf::GaugeRecord>& records) {
  std::ostringstream out;
  out << "station,t,value\n";
  for (const auto& r : records) out << r.station << ',' << csv::format(r.t) << ',' << csv::format(r.value) << '\n';
  csv::write_text(path, out.str());
}

metrics::FloodMask read_mask(const fs::path& path, const swe::ScenarioGrid& grid) {
  const AsciiGrid r = read_ascii_grid(path);
  if (r.ncols != grid.nx || r.nrows != grid.ny) throw InputError(path.string() + ": mask shape differs from the grid");
  metrics::FloodMask m;
  m.nx = grid.nx;
  m.ny = grid.ny;
  const auto n = static_cast<std::size_t>(grid.cell_count());
  m.wet.assign(n, 0);
  m.exclusion.assign(n, 0);
  bool any_excluded = false;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int k = grid.index(i, j);
      if (r.is_nodata(i, j)) {
        m.exclusion[k] = 1;
        any_excluded = true;
      } else {
        m.wet[k] = r.at(i, j) != 0.0 ? 1 : 0;
      }
    }
  }
  if (!any_excluded) m.exclusion.clear();
  return m;
}

void write_mask(const fs::path& path, const metrics::FloodMask& mask, const swe::ScenarioGrid& grid) {
  AsciiGrid r;
  r.ncols = grid.nx;
  r.nrows = grid.ny;
  r.xllcorner = grid.x0;
  r.yllcorner = grid.y0;
  r.cellsize = grid.dx;
  r.values.resize(mask.size());
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int k = grid.index(i, j);
      r.at(i, j) = mask.excluded(k) ? r.nodata : mask.wet[k];
    }
  }
  write_ascii_grid(path, r);
}

void write_twin_outputs(const TwinScenario& tw, const fs::path& twin_path, const fs::path& out) {
  const auto& grid = tw.model.scenario.grid;
  const auto truth = build_truth(tw);
  const fs::path obs_dir = out / "obs";
  const fs::path truth_dir = out / "truth";
  fs::create_directories(obs_dir);
  fs::create_directories(truth_dir);

  const auto gauges = generate_gauge_obs(truth, grid, tw.gauges.times(), tw.gauges.tau, tw.truth_bias, tw.seed);
  write_gauge_csv(obs_dir / "gauge_obs.csv", gauges.records);

  const auto exclusion = generate_exclusion(grid, tw.extent.exclusion_fraction, tw.seed);
  metrics::FloodMask excl_mask{grid.nx, grid.ny, exclusion, {}};
  write_mask(obs_dir / "exclusion.asc", excl_mask, grid);

  std::ostringstream overpasses;
  overpasses << "index,t,mask\n";
  for (std::size_t k = 0; k < tw.overpass_times.size(); ++k) {
    const double t = tw.overpass_times[k];
    const auto* state = truth.at(t);
    const auto mask = generate_flood_extent_obs(*state, grid, tw.extent, exclusion, derive_seed(tw.seed, "overpass", k));
    write_mask(obs_dir / mask_name(k), mask, grid);
    write_mask(truth_dir / mask_name(k), metrics::rasterize_flood_mask(*state, grid, tw.extent.threshold), grid);
    overpasses << k << ',' << csv::format(t) << ',' << mask_name(k) << '\n';
  }
  csv::write_text(obs_dir / "overpasses.csv", overpasses.str());

  std::ostringstream stations;
  stations << "station,t,z\n";
  for (const auto& s : enkf::station_series(truth, grid)) {
    for (std::size_t k = 0; k < s.t.size(); ++k) stations << s.station << ',' << csv::format(s.t[k]) << ',' << csv::format(s.z[k]) << '\n';
  }
  csv::write_text(truth_dir / "stations.csv", stations.str());
  json truth_info = {{"truth_control", uncertainty::control_to_json(tw.truth_control)}, {"truth_bias", tw.truth_bias}};
  csv::write_text(truth_dir / "truth.json", truth_info.dump(2) + "\n");

  // The observation manifest names its inputs but carries nothing derived
  // from the truth controls beyond the generated products themselves.
  const json common = {
      {"twin", {{"file", twin_path.filename().string()}, {"sha256", sha256_file(twin_path)}}},
      {"seed", tw.seed},
      {"gauges", {{"t_start", tw.gauges.t_start}, {"t_end", tw.gauges.t_end}, {"dt", tw.gauges.dt}, {"tau", tw.gauges.tau}}},
      {"extent",
       {{"flip_prob", tw.extent.flip_prob},
        {"exclusion_fraction", tw.extent.exclusion_fraction},
        {"threshold", tw.extent.threshold}}},
      {"version", "floodda 0.1.0"},
  };
  json obs_manifest = common;
  obs_manifest["format"] = "floodda-observations/1";
  obs_manifest["outputs"] = sha256_tree(obs_dir, "manifest.json");
  csv::write_text(obs_dir / "manifest.json", obs_manifest.dump(2) + "\n");
  json truth_manifest = common;
  truth_manifest["format"] = "floodda-truth/1";
  truth_manifest["outputs"] = sha256_tree(truth_dir, "manifest.json");
  csv::write_text(truth_dir / "manifest.json", truth_manifest.dump(2) + "\n");
}

ObservationProducts read_observations(const fs::path& obs_dir, const swe::ScenarioGrid& grid) {
  ObservationProducts p;
  p.gauges.records = read_gauge_csv(obs_dir / "gauge_obs.csv");
  for (const auto& r : p.gauges.records) grid.station(r.station);
  const auto excl = read_mask(obs_dir / "exclusion.asc", grid);
  p.exclusion = excl.wet;  // exclusion.asc stores 1 for excluded cells
  if (fs::exists(obs_dir / "overpasses.csv")) {
    const auto table = csv::read(obs_dir / "overpasses.csv");
    const auto it = table.column("t"), im = table.column("mask");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      p.overpass_times.push_back(csv::to_double(table.rows[r].at(it), "overpasses.csv row " + std::to_string(r + 2)));
      p.masks.push_back(read_mask(obs_dir / table.rows[r].at(im), grid));
    }
  }
  return p;
}

}  // namespace floodda::twinlab
