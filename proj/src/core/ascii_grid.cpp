#include "floodda/core/ascii_grid.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "floodda/core/csv.hpp"
#include "floodda/core/error.hpp"

namespace floodda {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

AsciiGrid read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  AsciiGrid grid;
  int seen = 0;
  std::string key;
  while (seen < 6 && in >> key) {
    std::string k = lower(key);
    double v = 0.0;
    if (!(in >> v)) throw InputError(path.string() + ": bad header value for " + key);
    if (k == "ncols") grid.ncols = static_cast<int>(v);
    else if (k == "nrows") grid.nrows = static_cast<int>(v);
    else if (k == "xllcorner" || k == "xllcenter") grid.xllcorner = v;
    else if (k == "yllcorner" || k == "yllcenter") grid.yllcorner = v;
    else if (k == "cellsize") grid.cellsize = v;
    else if (k == "nodata_value") grid.nodata = v;
    else throw InputError(path.string() + ": unknown header key " + key);
    ++seen;
  }
  if (grid.ncols <= 0 || grid.nrows <= 0 || !(grid.cellsize > 0.0)) {
    throw InputError(path.string() + ": invalid raster header");
  }
  const std::size_t n = static_cast<std::size_t>(grid.ncols) * grid.nrows;
  grid.values.reserve(n);
  std::string token;
  while (grid.values.size() < n && in >> token) {
    grid.values.push_back(csv::to_double(token, path.string()));
  }
  if (grid.values.size() != n) {
    throw InputError(path.string() + ": expected " + std::to_string(n) + " values, got " +
                     std::to_string(grid.values.size()));
  }
  return grid;
}

void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& grid) {
  std::ostringstream out;
  out << "ncols " << grid.ncols << "\n"
      << "nrows " << grid.nrows << "\n"
      << "xllcorner " << csv::format(grid.xllcorner) << "\n"
      << "yllcorner " << csv::format(grid.yllcorner) << "\n"
      << "cellsize " << csv::format(grid.cellsize) << "\n"
      << "NODATA_value " << csv::format(grid.nodata) << "\n";
  for (int r = 0; r < grid.nrows; ++r) {
    for (int c = 0; c < grid.ncols; ++c) {
      if (c) out << ' ';
      out << csv::format(grid.values[static_cast<std::size_t>(r) * grid.ncols + c]);
    }
    out << '\n';
  }
  csv::write_text(path, out.str());
}

}  // namespace floodda
