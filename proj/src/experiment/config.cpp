#include "floodda/experiment/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "floodda/uncertainty/control_json.hpp"

namespace floodda::experiment {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::set<std::string> kKeys{"experiment", "mode", "bias_correction", "bias_file", "n_e", "tau", "window",
                                  "lambda1", "lambda2", "covariance_normalization", "prior", "forecast",
                                  "scenario", "observations", "score_window", "peak_station", "kappa_mode",
                                  "seed", "output", "jobs"};
const std::set<std::string> kDaOnly{"tau", "window", "lambda1", "lambda2", "covariance_normalization", "forecast"};

template <class T>
T get(const json& j, const std::string& key, const std::string& field) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "missing or of the wrong type");
  }
}

double number(const json& j, const std::string& key, const std::string& field, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

void only_keys(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where.empty() ? "config" : where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string relative_path(const fs::path& p, const fs::path& to) {
  if (p.empty()) return {};
  const auto a = fs::absolute(p).lexically_normal();
  const auto b = fs::absolute(to).lexically_normal();
  const auto rel = a.lexically_relative(b);
  return rel.empty() ? a.generic_string() : rel.generic_string();
}

}  // namespace

enkf::CycleWindow ExperimentConfig::window(int c) const {
  const double offset = (c - 1) * first_window.t_shift;
  return {first_window.t_start + offset, first_window.t_end + offset, first_window.t_shift, first_window.spinup};
}

void ExperimentConfig::validate() const {
  if (name.empty()) throw ConfigError("experiment", "must be a non-empty name");
  if (mode == Mode::free_run && n_e != 1) throw ConfigError("n_e", "free runs use a single member");
  if (mode == Mode::da) {
    if (n_e < 2) throw ConfigError("n_e", "assimilation needs at least 2 members");
    if (!(tau > 0.0)) throw ConfigError("tau", "must be positive");
    try {
      first_window.validate();
    } catch (const InputError& e) {
      throw ConfigError("window", e.what());
    }
    if (cycles < 1) throw ConfigError("window.cycles", "must be at least 1");
    if (!(lambda1 >= 0.0)) throw ConfigError("lambda1", "must be non-negative");
    if (!(lambda2 >= 0.0)) throw ConfigError("lambda2", "must be non-negative");
    for (double lead : forecast.leads) {
      if (!(lead >= 0.0 && lead <= 86400.0)) throw ConfigError("forecast.leads", "lead times must lie in [0, 86400] s");
    }
    if (!(forecast.peak_halfwidth >= 0.0)) throw ConfigError("forecast.peak_halfwidth", "must be non-negative");
  }
  if (bias_correction && bias_file.empty()) throw ConfigError("bias_file", "required when bias_correction is on");
  if (scenario.empty()) throw ConfigError("scenario", "required");
  if (observations.empty()) throw ConfigError("observations", "required");
  if (score_window && !(score_window->second > score_window->first)) {
    throw ConfigError("score_window", "end must follow start");
  }
  if (jobs < 0) throw ConfigError("jobs", "must be non-negative");
  try {
    prior.validate();
  } catch (const InputError& e) {
    throw ConfigError("prior", e.what());
  }
}

ExperimentConfig parse_config(const json& j, const fs::path& base_dir) {
  only_keys(j, kKeys, "");
  ExperimentConfig c;
  c.name = get<std::string>(j, "experiment", "experiment");
  const auto mode = get<std::string>(j, "mode", "mode");
  if (mode == "free_run") {
    c.mode = Mode::free_run;
  } else if (mode == "da") {
    c.mode = Mode::da;
  } else {
    throw ConfigError("mode", "expected free_run or da");
  }
  if (c.mode == Mode::free_run) {
    for (const auto& key : kDaOnly) {
      if (j.contains(key)) throw ConfigError(key, "only used in da mode");
    }
  }
  if (j.contains("bias_correction")) {
    const auto& b = j.at("bias_correction");
    if (b.is_boolean()) {
      c.bias_correction = b.get<bool>();
    } else if (b == "on" || b == "off") {
      c.bias_correction = b == "on";
    } else {
      throw ConfigError("bias_correction", "expected on or off");
    }
  }
  if (j.contains("bias_file")) c.bias_file = resolve(base_dir, get<std::string>(j, "bias_file", "bias_file"));
  c.n_e = c.mode == Mode::da ? 24 : 1;
  if (j.contains("n_e")) {
    if (!j.at("n_e").is_number_integer()) throw ConfigError("n_e", "expected an integer");
    c.n_e = j.at("n_e").get<int>();
  }
  c.tau = number(j, "tau", "tau", c.tau);
  if (j.contains("window")) {
    const auto& w = j.at("window");
    only_keys(w, {"t_start", "T", "t_shift", "spinup", "cycles"}, "window");
    const double t_start = number(w, "t_start", "window.t_start", c.first_window.t_start);
    const double length = number(w, "T", "window.T", c.first_window.length());
    c.first_window = {t_start, t_start + length, number(w, "t_shift", "window.t_shift", c.first_window.t_shift),
                      number(w, "spinup", "window.spinup", c.first_window.spinup)};
    if (w.contains("cycles")) {
      if (!w.at("cycles").is_number_integer()) throw ConfigError("window.cycles", "expected an integer");
      c.cycles = w.at("cycles").get<int>();
    }
  }
  c.lambda1 = number(j, "lambda1", "lambda1", c.lambda1);
  c.lambda2 = number(j, "lambda2", "lambda2", c.lambda2);
  if (j.contains("covariance_normalization")) {
    const auto v = get<std::string>(j, "covariance_normalization", "covariance_normalization");
    if (v == "n_e") {
      c.normalization = enkf::CovarianceNormalization::ensemble_size;
    } else if (v == "n_e_minus_1") {
      c.normalization = enkf::CovarianceNormalization::ensemble_size_minus_one;
    } else {
      throw ConfigError("covariance_normalization", "expected n_e or n_e_minus_1");
    }
  }
  if (j.contains("prior")) {
    try {
      c.prior = uncertainty::prior_from_json(j.at("prior"));
    } catch (const InputError& e) {
      throw ConfigError("prior", e.what());
    }
  }
  if (j.contains("forecast")) {
    const auto& f = j.at("forecast");
    only_keys(f, {"enabled", "leads", "inflow", "peak_halfwidth"}, "forecast");
    if (f.contains("enabled")) c.forecast.enabled = get<bool>(f, "enabled", "forecast.enabled");
    if (f.contains("leads")) c.forecast.leads = get<std::vector<double>>(f, "leads", "forecast.leads");
    if (f.contains("inflow")) {
      const auto v = get<std::string>(f, "inflow", "forecast.inflow");
      if (v == "persistence") {
        c.forecast.inflow = enkf::ForecastInflow::persistence;
      } else if (v == "known") {
        c.forecast.inflow = enkf::ForecastInflow::known;
      } else {
        throw ConfigError("forecast.inflow", "expected persistence or known");
      }
    }
    c.forecast.peak_halfwidth = number(f, "peak_halfwidth", "forecast.peak_halfwidth", c.forecast.peak_halfwidth);
  }
  c.scenario = resolve(base_dir, get<std::string>(j, "scenario", "scenario"));
  c.observations = resolve(base_dir, get<std::string>(j, "observations", "observations"));
  if (j.contains("score_window")) {
    const auto w = get<std::vector<double>>(j, "score_window", "score_window");
    if (w.size() != 2) throw ConfigError("score_window", "expected [t0, t1]");
    c.score_window = std::make_pair(w[0], w[1]);
  }
  if (j.contains("peak_station")) c.peak_station = get<std::string>(j, "peak_station", "peak_station");
  if (j.contains("kappa_mode")) {
    const auto v = get<std::string>(j, "kappa_mode", "kappa_mode");
    if (v == "paper") {
      c.kappa_mode = metrics::KappaMode::paper;
    } else if (v == "standard") {
      c.kappa_mode = metrics::KappaMode::standard;
    } else {
      throw ConfigError("kappa_mode", "expected paper or standard");
    }
  }
  if (j.contains("seed")) {
    const auto& v = j.at("seed");
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output")) c.output = resolve(base_dir, get<std::string>(j, "output", "output"));
  if (j.contains("jobs")) {
    if (!j.at("jobs").is_number_integer()) throw ConfigError("jobs", "expected an integer");
    c.jobs = j.at("jobs").get<int>();
  }
  c.validate();
  return c;
}

ExperimentConfig read_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config", path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

json config_to_json(const ExperimentConfig& c, const fs::path& relative_to) {
  json j = {
      {"experiment", c.name},
      {"mode", c.mode == Mode::da ? "da" : "free_run"},
      {"bias_correction", c.bias_correction ? "on" : "off"},
      {"n_e", c.n_e},
      {"prior", uncertainty::prior_to_json(c.prior)},
      {"scenario", relative_path(c.scenario, relative_to)},
      {"observations", relative_path(c.observations, relative_to)},
      {"peak_station", c.peak_station},
      {"kappa_mode", c.kappa_mode == metrics::KappaMode::paper ? "paper" : "standard"},
      {"seed", c.seed},
  };
  if (c.bias_correction) j["bias_file"] = relative_path(c.bias_file, relative_to);
  if (c.score_window) j["score_window"] = {c.score_window->first, c.score_window->second};
  if (c.mode == Mode::da) {
    j["tau"] = c.tau;
    j["window"] = {{"t_start", c.first_window.t_start},
                   {"T", c.first_window.length()},
                   {"t_shift", c.first_window.t_shift},
                   {"spinup", c.first_window.spinup},
                   {"cycles", c.cycles}};
    j["lambda1"] = c.lambda1;
    j["lambda2"] = c.lambda2;
    j["covariance_normalization"] =
        c.normalization == enkf::CovarianceNormalization::ensemble_size ? "n_e" : "n_e_minus_1";
    j["forecast"] = {{"enabled", c.forecast.enabled},
                     {"leads", c.forecast.leads},
                     {"inflow", c.forecast.inflow == enkf::ForecastInflow::persistence ? "persistence" : "known"},
                     {"peak_halfwidth", c.forecast.peak_halfwidth}};
  }
  return j;
}

}  // namespace floodda::experiment
