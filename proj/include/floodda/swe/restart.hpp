#pragma once

#include <cstdint>
#include <filesystem>

#include "floodda/swe/types.hpp"

namespace floodda::swe {

/// Checksum of the grid geometry (dimensions, spacing, bathymetry bits).
std::uint64_t grid_checksum(const ScenarioGrid& grid);

/// Binary state dump tagged with the grid checksum.
void write_restart(const std::filesystem::path& path, const RiverState& state, const ScenarioGrid& grid);

/// Throws InputError if the file is malformed or was written for another grid.
RiverState read_restart(const std::filesystem::path& path, const ScenarioGrid& grid);

}  // namespace floodda::swe
