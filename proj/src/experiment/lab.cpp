#include "floodda/experiment/lab.hpp"

#include "floodda/core/csv.hpp"
#include "floodda/core/error.hpp"
#include "floodda/uncertainty/control_json.hpp"

namespace floodda::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

json twin_to_json(const LabOptions& o, const std::string& scenario_rel) {
  return {
      {"format", "floodda-twin/1"},
      {"scenario", scenario_rel},
      {"truth_control", uncertainty::control_to_json(o.truth_control)},
      {"truth_bias", o.truth_bias},
      {"gauges", {{"t_start", o.gauges.t_start}, {"t_end", o.gauges.t_end}, {"dt", o.gauges.dt}, {"tau", o.gauges.tau}}},
      {"overpass_times", o.overpass_times},
      {"extent",
       {{"flip_prob", o.extent.flip_prob},
        {"exclusion_fraction", o.extent.exclusion_fraction},
        {"threshold", o.extent.threshold}}},
      {"seed", o.seed},
  };
}

json default_config(const std::string& kind, std::uint64_t seed) {
  const bool da = kind == "DA1" || kind == "DA2";
  const bool bias = kind == "FR2" || kind == "DA2";
  if (!da && kind != "FR1" && kind != "FR2") throw InputError("unknown experiment kind " + kind);
  json j = {
      {"experiment", kind},
      {"mode", da ? "da" : "free_run"},
      {"bias_correction", bias ? "on" : "off"},
      {"scenario", "../scenario/scenario.json"},
      {"observations", "../twin/obs"},
      {"score_window", {0.0, 162000.0}},
      {"seed", seed},
      {"output", "../runs/" + kind},
  };
  if (bias) j["bias_file"] = "../runs/bias.csv";
  if (da) {
    j["n_e"] = 24;
    j["tau"] = 0.15;
    j["window"] = {{"t_start", 10800.0}, {"T", 43200.0}, {"t_shift", 21600.0}, {"spinup", 10800.0}, {"cycles", 6}};
    j["lambda1"] = 0.3;
    j["lambda2"] = 0.7;
    j["forecast"] = {{"enabled", kind == "DA2"}, {"leads", {21600.0, 43200.0, 64800.0, 86400.0}}, {"inflow", "persistence"}};
  }
  return j;
}

void write_default_lab(const fs::path& dir, const LabOptions& o) {
  const auto bundle = twinlab::build_default_scenario(o.scenario);
  twinlab::write_scenario(dir / "scenario", bundle);
  csv::write_text(dir / "twin.json", twin_to_json(o, "scenario/scenario.json").dump(2) + "\n");
  for (const char* kind : {"FR1", "FR2", "DA1", "DA2"}) {
    std::string file = kind;
    for (auto& ch : file) ch = static_cast<char>(std::tolower(ch));
    csv::write_text(dir / "configs" / (file + ".json"), default_config(kind, o.seed).dump(2) + "\n");
  }
}

}  // namespace floodda::experiment
