#pragma once

#include <filesystem>
#include <vector>

namespace floodda {

/// ESRI ASCII raster. `values` are stored in file order: row-major, first row
/// is the northern (top) edge.
struct AsciiGrid {
  int ncols = 0;
  int nrows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 1.0;
  double nodata = -9999.0;
  std::vector<double> values;

  /// Value at model cell (i, j) where j = 0 is the southern row.
  double at(int i, int j) const { return values[static_cast<std::size_t>(nrows - 1 - j) * ncols + i]; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(nrows - 1 - j) * ncols + i]; }
  bool is_nodata(int i, int j) const { return at(i, j) == nodata; }
};

AsciiGrid read_ascii_grid(const std::filesystem::path& path);
void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& grid);

}  // namespace floodda
