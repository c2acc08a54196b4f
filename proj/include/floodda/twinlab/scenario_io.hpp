#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "floodda/swe/solver.hpp"

namespace floodda::twinlab {

/// A model scenario together with the user-defined initial state every run
/// starts from.
struct ScenarioBundle {
  swe::Scenario scenario;
  swe::RiverState initial;  // initial.t is the scenario start time
};

/// Asset files referenced by a scenario manifest, keyed by relative path,
/// with their SHA-256 hashes.
using AssetHashes = std::map<std::string, std::string>;

/// Writes scenario.json plus bathymetry/zone/exclusion rasters, hydrograph and
/// rating-curve CSVs and the initial restart into `dir`. Returns the hashes
/// recorded in the manifest.
AssetHashes write_scenario(const std::filesystem::path& dir, const ScenarioBundle& bundle);

/// Reads a scenario manifest, verifying every asset hash. Relative asset
/// paths resolve against the manifest's directory.
ScenarioBundle read_scenario(const std::filesystem::path& manifest, AssetHashes* hashes = nullptr);

swe::Hydrograph read_hydrograph_csv(const std::filesystem::path& path);
void write_hydrograph_csv(const std::filesystem::path& path, const swe::Hydrograph& q);
swe::RatingCurve read_rating_csv(const std::filesystem::path& path);
void write_rating_csv(const std::filesystem::path& path, const swe::RatingCurve& rc);

}  // namespace floodda::twinlab
