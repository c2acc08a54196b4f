#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace floodda::swe {

inline constexpr int kZoneCount = 4;

/// A gauge located at a grid cell.
struct Station {
  std::string name;
  int cell = 0;
};

/// Structured rectangular grid. Cell (i, j) has index j * nx + i; i runs along
/// x (west to east), j along y (south to north). Upstream cells sit on the west
/// edge and receive the inflow hydrograph; downstream cells sit on the east
/// edge and drain through the rating curve. All other edges are walls.
struct ScenarioGrid {
  int nx = 0;
  int ny = 0;
  double dx = 1.0;
  double dy = 1.0;
  double x0 = 0.0;  // lower-left corner, raster georeference only
  double y0 = 0.0;
  std::vector<double> z_b;
  std::vector<std::uint8_t> friction_zone;  // 0 floodplain, 1..3 river bed
  std::vector<std::uint8_t> exclusion;      // 1 = observation-unreliable
  std::vector<Station> stations;
  std::vector<int> upstream_cells;
  std::vector<int> downstream_cells;

  int cell_count() const noexcept { return nx * ny; }
  int index(int i, int j) const noexcept { return j * nx + i; }
  int column_of(int cell) const noexcept { return cell % nx; }
  int row_of(int cell) const noexcept { return cell / nx; }
  double cell_area() const noexcept { return dx * dy; }

  const Station& station(std::string_view name) const;

  /// Throws InputError on the first violated invariant.
  void validate() const;
};

/// Depth-averaged flow state. Velocities are zero wherever h < h_dry.
struct RiverState {
  double t = 0.0;
  std::vector<double> h;
  std::vector<double> u;
  std::vector<double> v;

  /// Water at rest with free surface `level` (dry where the bed is higher).
  static RiverState at_rest(const ScenarioGrid& grid, double level, double t = 0.0);

  double free_surface(const ScenarioGrid& grid, int cell) const { return grid.z_b[cell] + h[cell]; }
};

struct PhysicalParams {
  double g = 9.81;
  double h_dry = 1e-4;
  double nu_e = 0.0;
  // 0.45 keeps the unsplit 2D update positivity-preserving for dx == dy.
  double cfl = 0.45;
  double dt_max = 60.0;

  void validate() const;
};

/// Strickler coefficients per friction zone (m^(1/3)/s).
struct FrictionSet {
  std::array<double, kZoneCount> ks{17.0, 45.0, 38.0, 40.0};

  void validate() const;
};

}  // namespace floodda::swe
