#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "floodda/twinlab/default_scenario.hpp"
#include "floodda/twinlab/twin.hpp"

namespace floodda::experiment {

/// Defaults for a ready-to-run twin laboratory: the default scenario, a
/// hidden truth and the four experiment configurations.
struct LabOptions {
  twinlab::DefaultScenarioOptions scenario;
  uncertainty::ControlVector truth_control{15.0, 44.0, 37.5, 40.5, 1.08, -48.0, 1200.0};
  std::map<std::string, double> truth_bias{{"upper", 0.72}, {"middle", 0.40}, {"lower", -0.23}};
  twinlab::GaugeSampling gauges{0.0, 172800.0, 900.0, 0.005};
  std::vector<double> overpass_times{75600.0, 97200.0, 118800.0, 140400.0, 162000.0};
  twinlab::ExtentDegradation extent{0.02, 0.086, metrics::kFloodThreshold};
  std::uint64_t seed = 1;
  double calibration_end = 43200.0;  // bias diagnosis window [0, calibration_end]
};

/// Writes scenario/, twin.json and configs/{fr1,fr2,da1,da2}.json under
/// `dir`. Configs read observations from twin/obs and write to runs/.
void write_default_lab(const std::filesystem::path& dir, const LabOptions& opt = {});

nlohmann::json twin_to_json(const LabOptions& opt, const std::string& scenario_rel);

/// Configuration for one of "FR1", "FR2", "DA1", "DA2".
nlohmann::json default_config(const std::string& kind, std::uint64_t seed);

}  // namespace floodda::experiment
