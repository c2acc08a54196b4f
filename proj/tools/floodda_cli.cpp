// floodda: twin-experiment driver for the shallow-water / EnKF laboratory.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>

#include "floodda/core/error.hpp"
#include "floodda/enkf/cycle.hpp"
#include "floodda/experiment/config.hpp"
#include "floodda/experiment/experiment.hpp"
#include "floodda/experiment/lab.hpp"
#include "floodda/twinlab/twin.hpp"

namespace {

using namespace floodda;
namespace fs = std::filesystem;

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

int cmd_run(const fs::path& config, std::optional<std::uint64_t> seed, std::optional<int> jobs,
            std::optional<fs::path> output) {
  auto cfg = experiment::read_config(config);
  if (seed) cfg.seed = *seed;
  if (jobs) cfg.jobs = *jobs;
  if (output) cfg.output = *output;
  experiment::run_experiment(cfg);
  std::cout << cfg.name << ": outputs in " << cfg.output.string() << '\n';
  return 0;
}

int cmd_truth(const fs::path& twin, std::optional<std::uint64_t> seed, std::optional<fs::path> output) {
  auto tw = twinlab::read_twin(twin);
  if (seed) tw.seed = *seed;
  const fs::path out = output ? *output : twin.parent_path() / "twin";
  twinlab::write_twin_outputs(tw, twin, out);
  std::cout << "observations in " << (out / "obs").string() << ", reference in " << (out / "truth").string() << '\n';
  return 0;
}

int cmd_diagnose(const fs::path& free_run, const fs::path& obs, const std::vector<double>& window,
                 const fs::path& output) {
  const auto bias = experiment::diagnose_bias(free_run, obs, window.at(0), window.at(1), output);
  for (const auto& [station, b] : bias) std::printf("%s %.6f\n", station.c_str(), b);
  return 0;
}

int cmd_score(const fs::path& dir) {
  const auto rows = experiment::score_experiment(dir);
  std::cout << rows.size() << " scores written to " << (dir / "scores.csv").string() << '\n';
  return 0;
}

int cmd_make_scenario(const fs::path& dir, std::optional<std::uint64_t> seed, bool double_peak) {
  experiment::LabOptions opt;
  if (seed) opt.seed = *seed;
  if (double_peak) {
    opt.scenario.event.peak = 3000.0;
    opt.scenario.event.t_peak = 86400.0;
    opt.scenario.event.second_peak = 3400.0;
    opt.scenario.event.t_second_peak = 126000.0;
  }
  experiment::write_default_lab(dir, opt);
  std::cout << "scenario, twin.json and configs written to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flood simulation and data-assimilation twin laboratory"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<fs::path> output;

  fs::path config;
  auto* run = app.add_subcommand("run", "Run an experiment from a configuration file");
  run->add_option("config", config, "Experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--jobs", jobs, "OpenMP threads for ensemble members (results do not depend on it)");
  run->add_option("--output", output, "Override the output directory");

  fs::path twin;
  auto* truth = app.add_subcommand("truth", "Run the hidden truth and write synthetic observations");
  truth->add_option("twin", twin, "Twin description (JSON)")->required()->check(CLI::ExistingFile);
  truth->add_option("--seed", seed, "Override the observation seed");
  truth->add_option("--output", output, "Output directory (default: twin/ next to the twin file)");

  fs::path free_run, obs_dir, bias_out;
  std::vector<double> window;
  auto* diag = app.add_subcommand("diagnose-bias", "Estimate per-station model-observation bias from a free run");
  diag->add_option("--free-run", free_run, "Free-run output directory")->required()->check(CLI::ExistingDirectory);
  diag->add_option("--obs", obs_dir, "Observation directory")->required()->check(CLI::ExistingDirectory);
  diag->add_option("--window", window, "Calibration window t0 t1 (s)")->required()->expected(2);
  diag->add_option("--output", bias_out, "Bias CSV to write")->required();

  fs::path score_dir;
  auto* score = app.add_subcommand("score", "Recompute scores.csv for a finished experiment");
  score->add_option("dir", score_dir, "Experiment output directory")->required()->check(CLI::ExistingDirectory);

  fs::path lab_dir;
  bool double_peak = false;
  auto* make = app.add_subcommand("make-scenario", "Write the default scenario, twin and experiment configs");
  make->add_option("dir", lab_dir, "Target directory")->required();
  make->add_option("--seed", seed, "Seed recorded in twin.json and the configs");
  make->add_flag("--double-peak", double_peak, "Two-peak event hydrograph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) return cmd_run(config, seed, jobs, output);
    if (*truth) return cmd_truth(twin, seed, output);
    if (*diag) return cmd_diagnose(free_run, obs_dir, window, bias_out);
    if (*score) return cmd_score(score_dir);
    if (*make) return cmd_make_scenario(lab_dir, seed, double_peak);
  } catch (const experiment::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kUsageError;
  } catch (const enkf::MemberFailure& e) {
    std::cerr << "assimilation failed: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
