#include "floodda/swe/types.hpp"

#include <algorithm>
#include <cmath>

#include "floodda/core/error.hpp"

namespace floodda::swe {

const Station& ScenarioGrid::station(std::string_view name) const {
  for (const auto& s : stations) {
    if (s.name == name) return s;
  }
  throw InputError("unknown station '" + std::string(name) + "'");
}

void ScenarioGrid::validate() const {
  if (nx <= 0 || ny <= 0) throw InputError("grid: nx and ny must be positive");
  if (!(dx > 0.0) || !(dy > 0.0)) throw InputError("grid: dx and dy must be positive");
  const auto n = static_cast<std::size_t>(cell_count());
  if (z_b.size() != n) throw InputError("grid: bathymetry size mismatch");
  if (friction_zone.size() != n) throw InputError("grid: friction zone size mismatch");
  if (exclusion.size() != n) throw InputError("grid: exclusion size mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(z_b[k])) throw InputError("grid: non-finite bed elevation at cell " + std::to_string(k));
    if (friction_zone[k] >= kZoneCount) {
      throw InputError("grid: friction zone out of range at cell " + std::to_string(k));
    }
  }
  for (const auto& s : stations) {
    if (s.cell < 0 || s.cell >= cell_count()) throw InputError("grid: station " + s.name + " outside grid");
    int i = column_of(s.cell), j = row_of(s.cell);
    bool interior = nx < 3 || ny < 3 ? (i > 0 && i < nx - 1) : (i > 0 && i < nx - 1 && j > 0 && j < ny - 1);
    if (!interior) throw InputError("grid: station " + s.name + " is not an interior cell");
  }
  for (int c : upstream_cells) {
    if (c < 0 || c >= cell_count() || column_of(c) != 0) {
      throw InputError("grid: upstream cell " + std::to_string(c) + " is not on the west edge");
    }
  }
  for (int c : downstream_cells) {
    if (c < 0 || c >= cell_count() || column_of(c) != nx - 1) {
      throw InputError("grid: downstream cell " + std::to_string(c) + " is not on the east edge");
    }
  }
}

RiverState RiverState::at_rest(const ScenarioGrid& grid, double level, double t) {
  RiverState s;
  s.t = t;
  const auto n = static_cast<std::size_t>(grid.cell_count());
  s.h.resize(n);
  s.u.assign(n, 0.0);
  s.v.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) s.h[k] = std::max(0.0, level - grid.z_b[k]);
  return s;
}

void PhysicalParams::validate() const {
  if (!(g > 0.0)) throw InputError("params: g must be positive");
  if (!(h_dry > 0.0)) throw InputError("params: h_dry must be positive");
  if (!(nu_e >= 0.0)) throw InputError("params: nu_e must be non-negative");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InputError("params: cfl must lie in (0, 1]");
  if (!(dt_max > 0.0)) throw InputError("params: dt_max must be positive");
}

void FrictionSet::validate() const {
  for (int z = 0; z < kZoneCount; ++z) {
    if (!(ks[z] > 0.0)) throw InputError("friction: ks[" + std::to_string(z) + "] must be positive");
  }
}

}  // namespace floodda::swe
