#pragma once

#include <string>

#include <json.hpp>

#include "floodda/uncertainty/control.hpp"

namespace floodda::uncertainty {

/// {"ks0": .., "ks1": .., ..., "c": ..}; components absent from `j` keep
/// their value in `defaults`. Unknown keys throw InputError.
ControlVector control_from_json(const nlohmann::json& j, const ControlVector& defaults = {});
nlohmann::json control_to_json(const ControlVector& x);

ControlPrior prior_from_json(const nlohmann::json& j);
nlohmann::json prior_to_json(const ControlPrior& p);

}  // namespace floodda::uncertainty
