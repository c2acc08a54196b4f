#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "floodda/enkf/observation.hpp"
#include "floodda/metrics/scores.hpp"
#include "floodda/twinlab/scenario_io.hpp"
#include "floodda/uncertainty/control.hpp"

namespace floodda::twinlab {

struct ExtentDegradation {
  double flip_prob = 0.0;
  double exclusion_fraction = 0.086;
  double threshold = metrics::kFloodThreshold;

  void validate() const;
};

struct GaugeSampling {
  double t_start = 0.0;
  double t_end = 172800.0;
  double dt = 900.0;
  double tau = 0.0;  // relative noise of the synthetic gauges

  std::vector<double> times() const;
};

/// Hidden reference run and the recipe for degrading it into observations.
struct TwinScenario {
  ScenarioBundle model;
  uncertainty::ControlVector truth_control{};
  std::map<std::string, double> truth_bias;
  GaugeSampling gauges;
  std::vector<double> overpass_times;
  ExtentDegradation extent;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Reads a twin description; its "scenario" entry resolves relative to the file.
TwinScenario read_twin(const std::filesystem::path& path, AssetHashes* scenario_hashes = nullptr);

/// Truth trajectory from the scenario's initial state with truth_control
/// applied to friction and inflow; records every gauge and overpass time.
swe::Trajectory build_truth(const TwinScenario& tw);

/// Output times shared by the truth run and free runs on the same scenario.
std::vector<double> record_times(const GaugeSampling& gauges, const std::vector<double>& overpasses);

/// obs = Z + bias + N(0, (tau Z)^2) for every station and sampling time.
enkf::GaugeObservationSet generate_gauge_obs(const swe::Trajectory& truth, const swe::ScenarioGrid& grid,
                                             const std::vector<double>& times, double tau,
                                             const std::map<std::string, double>& bias, std::uint64_t seed);

/// Contiguous patches covering exactly round(fraction * cells) cells.
std::vector<std::uint8_t> generate_exclusion(const swe::ScenarioGrid& grid, double fraction, std::uint64_t seed);

/// Truth mask with each non-excluded pixel flipped independently with
/// probability flip_prob; `exclusion` is attached to the mask.
metrics::FloodMask generate_flood_extent_obs(const swe::RiverState& truth, const swe::ScenarioGrid& grid,
                                             const ExtentDegradation& degr,
                                             const std::vector<std::uint8_t>& exclusion, std::uint64_t seed);

/// Observation products as written to disk.
struct ObservationProducts {
  enkf::GaugeObservationSet gauges;
  std::vector<double> overpass_times;
  std::vector<metrics::FloodMask> masks;  // one per overpass, exclusion attached
  std::vector<std::uint8_t> exclusion;
};

/// Runs the truth and writes `<out>/obs` (what experiments may read) and
/// `<out>/truth` (reference material, never read by experiments).
void write_twin_outputs(const TwinScenario& tw, const std::filesystem::path& twin_path,
                        const std::filesystem::path& out);

/// Loads an observation directory written by write_twin_outputs.
ObservationProducts read_observations(const std::filesystem::path& obs_dir, const swe::ScenarioGrid& grid);

std::vector<enkf::GaugeRecord> read_gauge_csv(const std::filesystem::path& path);
void write_gauge_csv(const std::filesystem::path& path, const std::vector<enkf::GaugeRecord>& records);

metrics::FloodMask read_mask(const std::filesystem::path& path, const swe::ScenarioGrid& grid);
void write_mask(const std::filesystem::path& path, const metrics::FloodMask& mask, const swe::ScenarioGrid& grid);

}  // namespace floodda::twinlab
