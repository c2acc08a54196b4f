#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "floodda/enkf/cycle.hpp"
#include "floodda/metrics/scores.hpp"
#include "floodda/uncertainty/control.hpp"

namespace floodda::experiment {

/// Invalid configuration; `field()` names the offending entry.
class ConfigError : public InputError {
 public:
  ConfigError(std::string field, const std::string& what)
      : InputError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Mode { free_run, da };

struct ForecastSettings {
  bool enabled = true;
  std::vector<double> leads{21600.0, 43200.0, 64800.0, 86400.0};
  enkf::ForecastInflow inflow = enkf::ForecastInflow::persistence;
  double peak_halfwidth = 43200.0;  // forecast RMSE window around the observed peak
};

struct ExperimentConfig {
  std::string name;
  Mode mode = Mode::free_run;
  bool bias_correction = false;
  std::filesystem::path bias_file;
  int n_e = 1;
  double tau = 0.15;
  enkf::CycleWindow first_window{10800.0, 54000.0, 21600.0, 10800.0};
  int cycles = 6;
  double lambda1 = 0.3;
  double lambda2 = 0.7;
  enkf::CovarianceNormalization normalization = enkf::CovarianceNormalization::ensemble_size;
  uncertainty::ControlPrior prior{};
  ForecastSettings forecast;
  std::filesystem::path scenario;
  std::filesystem::path observations;
  std::optional<std::pair<double, double>> score_window;
  std::string peak_station = "middle";
  metrics::KappaMode kappa_mode = metrics::KappaMode::paper;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  int jobs = 0;  // 0 = OpenMP default

  /// Window of cycle c (1-based).
  enkf::CycleWindow window(int c) const;
  void validate() const;
};

/// Parses a configuration object; relative paths resolve against `base_dir`.
/// Throws ConfigError naming the first invalid field.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

ExperimentConfig read_config(const std::filesystem::path& path);

/// Normalised echo of `cfg` with every default made explicit. Paths are
/// written relative to `relative_to`; output and jobs are omitted since they
/// do not affect results.
nlohmann::json config_to_json(const ExperimentConfig& cfg, const std::filesystem::path& relative_to);

}  // namespace floodda::experiment
