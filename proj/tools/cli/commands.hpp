#pragma once

#include <json.hpp>

namespace cli {

/// Each returns the process exit code; configuration errors throw CliError
/// before anything is written.
int cmd_energy(const nlohmann::json& cfg);
int cmd_spectrum(const nlohmann::json& cfg);
int cmd_phase_diagram(const nlohmann::json& cfg);
int cmd_minimize(const nlohmann::json& cfg);
int cmd_flow(const nlohmann::json& cfg);
int cmd_gamma0(const nlohmann::json& cfg);

}  // namespace cli
