#include "floodda/twinlab/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "floodda/core/ascii_grid.hpp"
#include "floodda/core/csv.hpp"
#include "floodda/core/error.hpp"
#include "floodda/core/hash.hpp"
#include "floodda/swe/restart.hpp"

namespace floodda::twinlab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kFormat = "floodda-scenario/1";

AsciiGrid raster_of(const swe::ScenarioGrid& g) {
  AsciiGrid r;
  r.ncols = g.nx;
  r.nrows = g.ny;
  r.xllcorner = g.x0;
  r.yllcorner = g.y0;
  r.cellsize = g.dx;
  r.values.assign(static_cast<std::size_t>(g.cell_count()), 0.0);
  return r;
}

std::vector<std::pair<double, double>> read_pairs(const fs::path& path, const char* xname, const char* yname) {
  const auto table = csv::read(path);
  const auto ix = table.column(xname);
  const auto iy = table.column(yname);
  std::vector<std::pair<double, double>> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string ctx = path.string() + " row " + std::to_string(r + 2);
    out.emplace_back(csv::to_double(table.rows[r].at(ix), ctx), csv::to_double(table.rows[r].at(iy), ctx));
  }
  return out;
}

void write_pairs(const fs::path& path, const char* header, const std::vector<std::pair<double, double>>& rows) {
  std::ostringstream out;
  out << header << '\n';
  for (const auto& [x, y] : rows) out << csv::format(x) << ',' << csv::format(y) << '\n';
  csv::write_text(path, out.str());
}

json cell_json(const swe::ScenarioGrid& g, int cell) { return {{"i", g.column_of(cell)}, {"j", g.row_of(cell)}}; }

int cell_from_json(const swe::ScenarioGrid& g, const json& j, const std::string& what) {
  const int i = j.at("i").get<int>();
  const int jj = j.at("j").get<int>();
  if (i < 0 || i >= g.nx || jj < 0 || jj >= g.ny) throw InputError(what + ": cell (" + std::to_string(i) + ", " + std::to_string(jj) + ") outside the grid");
  return g.index(i, jj);
}

}  // namespace

swe::Hydrograph read_hydrograph_csv(const fs::path& path) { return swe::Hydrograph(read_pairs(path, "t", "q")); }

void write_hydrograph_csv(const fs::path& path, const swe::Hydrograph& q) { write_pairs(path, "t,q", q.samples()); }

swe::RatingCurve read_rating_csv(const fs::path& path) { return swe::RatingCurve(read_pairs(path, "stage", "q")); }

void write_rating_csv(const fs::path& path, const swe::RatingCurve& rc) { write_pairs(path, "stage,q", rc.samples()); }

AssetHashes write_scenario(const fs::path& dir, const ScenarioBundle& bundle) {
  const auto& sc = bundle.scenario;
  const auto& g = sc.grid;
  g.validate();
  if (g.dx != g.dy) throw InputError("write_scenario: ESRI ASCII rasters need square cells");
  fs::create_directories(dir);

  AsciiGrid bed = raster_of(g), zones = raster_of(g), excl = raster_of(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index(i, j);
      bed.at(i, j) = g.z_b[k];
      zones.at(i, j) = g.friction_zone[k];
      excl.at(i, j) = g.exclusion.empty() ? 0.0 : g.exclusion[k];
    }
  }
  write_ascii_grid(dir / "bathymetry.asc", bed);
  write_ascii_grid(dir / "zones.asc", zones);
  write_ascii_grid(dir / "exclusion.asc", excl);
  write_hydrograph_csv(dir / "inflow.csv", sc.inflow);
  write_rating_csv(dir / "rating.csv", sc.rating);
  swe::write_restart(dir / "initial.rst", bundle.initial, g);

  AssetHashes hashes;
  for (const char* name : {"bathymetry.asc", "zones.asc", "exclusion.asc", "inflow.csv", "rating.csv", "initial.rst"}) {
    hashes[name] = sha256_file(dir / name);
  }

  json stations = json::array();
  for (const auto& s : g.stations) {
    json e = cell_json(g, s.cell);
    e["name"] = s.name;
    stations.push_back(e);
  }
  json up = json::array(), down = json::array();
  for (int c : g.upstream_cells) up.push_back(cell_json(g, c));
  for (int c : g.downstream_cells) down.push_back(cell_json(g, c));
  const auto& p = sc.params;
  json m = {
      {"format", kFormat},
      {"rasters", {{"bathymetry", "bathymetry.asc"}, {"zones", "zones.asc"}, {"exclusion", "exclusion.asc"}}},
      {"inflow", "inflow.csv"},
      {"rating", "rating.csv"},
      {"initial_state", "initial.rst"},
      {"stations", stations},
      {"upstream_cells", up},
      {"downstream_cells", down},
      {"params", {{"g", p.g}, {"h_dry", p.h_dry}, {"nu_e", p.nu_e}, {"cfl", p.cfl}, {"dt_max", p.dt_max}}},
      {"hashes", hashes},
  };
  csv::write_text(dir / "scenario.json", m.dump(2) + "\n");
  return hashes;
}

ScenarioBundle read_scenario(const fs::path& manifest, AssetHashes* hashes_out) {
  std::ifstream in(manifest);
  if (!in) throw InputError("cannot open scenario " + manifest.string());
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(manifest.string() + ": " + e.what());
  }
  const fs::path base = manifest.parent_path();
  try {
    if (m.value("format", std::string{}) != kFormat) throw InputError("unsupported scenario format");
    AssetHashes hashes = m.at("hashes").get<AssetHashes>();
    auto asset = [&](const std::string& rel) {
      const fs::path p = base / rel;
      const auto it = hashes.find(rel);
      if (it == hashes.end()) throw InputError("no hash recorded for asset " + rel);
      if (sha256_file(p) != it->second) throw InputError("hash mismatch for asset " + rel);
      return p;
    };

    ScenarioBundle b;
    auto& g = b.scenario.grid;
    const auto& rasters = m.at("rasters");
    const AsciiGrid bed = read_ascii_grid(asset(rasters.at("bathymetry").get<std::string>()));
    const AsciiGrid zones = read_ascii_grid(asset(rasters.at("zones").get<std::string>()));
    g.nx = bed.ncols;
    g.ny = bed.nrows;
    g.dx = g.dy = bed.cellsize;
    g.x0 = bed.xllcorner;
    g.y0 = bed.yllcorner;
    auto same_shape = [&](const AsciiGrid& r, const std::string& what) {
      if (r.ncols != g.nx || r.nrows != g.ny) throw InputError(what + " raster shape differs from bathymetry");
    };
    same_shape(zones, "zone");
    const auto n = static_cast<std::size_t>(g.cell_count());
    g.z_b.resize(n);
    g.friction_zone.resize(n);
    g.exclusion.assign(n, 0);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const int k = g.index(i, j);
        g.z_b[k] = bed.at(i, j);
        const double zone = zones.at(i, j);
        if (zone != std::floor(zone) || zone < 0 || zone >= swe::kZoneCount) {
          throw InputError("zone raster: invalid zone id at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
        g.friction_zone[k] = static_cast<std::uint8_t>(zone);
      }
    }
    if (rasters.contains("exclusion")) {
      const AsciiGrid excl = read_ascii_grid(asset(rasters.at("exclusion").get<std::string>()));
      same_shape(excl, "exclusion");
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) g.exclusion[g.index(i, j)] = excl.at(i, j) != 0.0 ? 1 : 0;
    }
    for (const auto& s : m.at("stations")) {
      g.stations.push_back({s.at("name").get<std::string>(), cell_from_json(g, s, "station")});
    }
    for (const auto& c : m.at("upstream_cells")) g.upstream_cells.push_back(cell_from_json(g, c, "upstream_cells"));
    for (const auto& c : m.at("downstream_cells")) g.downstream_cells.push_back(cell_from_json(g, c, "downstream_cells"));
    g.validate();

    b.scenario.inflow = read_hydrograph_csv(asset(m.at("inflow").get<std::string>()));
    b.scenario.rating = read_rating_csv(asset(m.at("rating").get<std::string>()));
    auto& p = b.scenario.params;
    const auto& pj = m.at("params");
    p.g = pj.value("g", p.g);
    p.h_dry = pj.value("h_dry", p.h_dry);
    p.nu_e = pj.value("nu_e", p.nu_e);
    p.cfl = pj.value("cfl", p.cfl);
    p.dt_max = pj.value("dt_max", p.dt_max);
    p.validate();
    b.initial = swe::read_restart(asset(m.at("initial_state").get<std::string>()), g);
    if (hashes_out) *hashes_out = std::move(hashes);
    return b;
  } catch (const json::exception& e) {
    throw InputError(manifest.string() + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(manifest.string() + ": " + e.what());
  }
}

}  // namespace floodda::twinlab
