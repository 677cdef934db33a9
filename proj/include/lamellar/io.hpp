#pragma once

#include <string>

#include "lamellar/profiles.hpp"
#include "lamellar/sharp_energy.hpp"

namespace lamellar {

/// {"N": int, "m": real, "interfaces": [reals]}; doubles round-trip exactly.
std::string profile_to_json(const StepProfile& p);
StepProfile profile_from_json(const std::string& text);

/// {"h": ..., "w": ..., "k": ..., "total": ...}
std::string energy_to_json(const EnergyBreakdown& e);

}  // namespace lamellar
