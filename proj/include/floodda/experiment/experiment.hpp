#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floodda/experiment/config.hpp"

namespace floodda::experiment {

/// One row of scores.csv. `time` is empty for event-wide scores.
struct ScoreRow {
  std::string experiment;
  std::optional<double> time;
  std::string metric;
  std::optional<double> value;  // nullopt = undefined score
};

/// Executes the configured pipeline and writes the output tree under
/// cfg.output, finishing with manifest.json. Throws ConfigError for invalid
/// inputs and enkf::MemberFailure / SolverInstability for runtime failures.
void run_experiment(const ExperimentConfig& cfg);

/// Per-station mean of (obs - model) over [t0, t1], using the free run's
/// stations.csv. Writes `bias_out` (station,bias) and returns the values.
std::map<std::string, double> diagnose_bias(const std::filesystem::path& free_run_dir,
                                            const std::filesystem::path& obs_dir, double t0, double t1,
                                            const std::filesystem::path& bias_out);

std::map<std::string, double> read_bias_csv(const std::filesystem::path& path);
void write_bias_csv(const std::filesystem::path& path, const std::map<std::string, double>& bias);

/// Recomputes every score of a finished experiment from its output files and
/// rewrites scores.csv. Throws InputError listing missing artifacts.
std::vector<ScoreRow> score_experiment(const std::filesystem::path& output_dir);

std::vector<ScoreRow> read_scores_csv(const std::filesystem::path& path);

/// Looks up a score by metric and (optionally) time.
std::optional<double> find_score(const std::vector<ScoreRow>& rows, const std::string& metric,
                                 std::optional<double> time = std::nullopt);

/// Time of the largest observed level at `station`.
double observed_peak_time(const std::vector<enkf::GaugeRecord>& records, const std::string& station);

}  // namespace floodda::experiment
