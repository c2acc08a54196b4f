#include "floodda/uncertainty/control_json.hpp"

#include <algorithm>

#include "floodda/core/error.hpp"

namespace floodda::uncertainty {

using nlohmann::json;

namespace {

std::array<double, kControlSize> array_from_json(const json& j, std::array<double, kControlSize> x,
                                                 const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    const auto it = std::find(kControlNames.begin(), kControlNames.end(), key);
    if (it == kControlNames.end()) throw InputError(std::string(what) + ": unknown component '" + key + "'");
    if (!value.is_number()) throw InputError(std::string(what) + "." + key + ": expected a number");
    x[static_cast<std::size_t>(it - kControlNames.begin())] = value.get<double>();
  }
  return x;
}

json array_to_json(const std::array<double, kControlSize>& x) {
  json j = json::object();
  for (int k = 0; k < kControlSize; ++k) j[std::string(kControlNames[k])] = x[k];
  return j;
}

}  // namespace

ControlVector control_from_json(const json& j, const ControlVector& defaults) {
  return ControlVector::from_array(array_from_json(j, defaults.to_array(), "control"));
}

json control_to_json(const ControlVector& x) { return array_to_json(x.to_array()); }

ControlPrior prior_from_json(const json& j) {
  ControlPrior p;
  if (!j.is_object()) throw InputError("prior: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "mean") {
      p.mean = control_from_json(value, p.mean);
    } else if (key == "sigma") {
      p.sigma = array_from_json(value, p.sigma, "prior.sigma");
    } else {
      throw InputError("prior: unknown key '" + key + "'");
    }
  }
  p.validate();
  return p;
}

json prior_to_json(const ControlPrior& p) { return {{"mean", control_to_json(p.mean)}, {"sigma", array_to_json(p.sigma)}}; }

}  // namespace floodda::uncertainty
