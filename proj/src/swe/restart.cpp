#include "floodda/swe/restart.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "floodda/core/error.hpp"

namespace floodda::swe {
namespace {

constexpr std::array<char, 8> kMagic{'F', 'L', 'D', 'A', 'R', 'S', 'T', '1'};

void mix(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

template <class T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw InputError(path.string() + ": truncated restart");
  return value;
}

}  // namespace

std::uint64_t grid_checksum(const ScenarioGrid& grid) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  mix(h, &grid.nx, sizeof grid.nx);
  mix(h, &grid.ny, sizeof grid.ny);
  mix(h, &grid.dx, sizeof grid.dx);
  mix(h, &grid.dy, sizeof grid.dy);
  mix(h, grid.z_b.data(), grid.z_b.size() * sizeof(double));
  return h;
}

void write_restart(const std::filesystem::path& path, const RiverState& state, const ScenarioGrid& grid) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put<std::int32_t>(out, grid.nx);
  put<std::int32_t>(out, grid.ny);
  put<std::uint64_t>(out, grid_checksum(grid));
  put<double>(out, state.t);
  for (const auto* field : {&state.h, &state.u, &state.v}) {
    out.write(reinterpret_cast<const char*>(field->data()), static_cast<std::streamsize>(field->size() * sizeof(double)));
  }
}

RiverState read_restart(const std::filesystem::path& path, const ScenarioGrid& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (magic != kMagic) throw InputError(path.string() + ": not a restart file");
  const auto nx = get<std::int32_t>(in, path);
  const auto ny = get<std::int32_t>(in, path);
  const auto checksum = get<std::uint64_t>(in, path);
  if (nx != grid.nx || ny != grid.ny || checksum != grid_checksum(grid)) {
    throw InputError(path.string() + ": restart was written for a different grid");
  }
  RiverState state;
  state.t = get<double>(in, path);
  const auto n = static_cast<std::size_t>(grid.cell_count());
  for (auto* field : {&state.h, &state.u, &state.v}) {
    field->resize(n);
    if (!in.read(reinterpret_cast<char*>(field->data()), static_cast<std::streamsize>(n * sizeof(double)))) {
      throw InputError(path.string() + ": truncated restart");
    }
  }
  return state;
}

}  // namespace floodda::swe
