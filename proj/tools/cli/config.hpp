#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace cli {

/// Resolved parameter listing, written into output headers in this order.
using ParamList = std::vector<std::pair<std::string, std::string>>;

struct Common {
  std::string command;
  std::optional<std::string> out;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct EnergyConfig {
  std::vector<int> N;
  double s = 0.25;
  std::vector<double> gamma;
  int tail_terms = 0;
};

struct SpectrumConfig {
  std::vector<int> N;
  double s = 0.25;
  std::vector<double> gamma;
  double m = 0.0;
  int tail_terms = 0;
};

struct PhaseDiagramConfig {
  std::vector<int> N;
  std::vector<double> s;
  /// Exactly one of the two is non-empty.
  std::vector<double> gamma;
  std::vector<double> gamma_over_gamma0;
  int tail_terms = 0;
};

struct MinimizeConfig {
  int N = 4;
  double s = 0.25;
  std::optional<double> gamma;
  std::optional<double> gamma_over_gamma0;
  std::optional<double> gamma_over_gamma_star;
  std::optional<double> amplitude;  // default 1/(10N)
  int max_iterations = 20000;
  double gradient_tolerance = 1e-9;
  int tail_terms = 0;
};

struct FlowConfig {
  int N = 2;
  double s = 0.25;
  double gamma = 0.05;
  double m = 0.0;
  std::vector<double> eps;
  int grid_points = 4096;
  double dt = 0.1;
  std::optional<double> stabilization;
  int max_steps = 10000;
  double energy_tolerance = 1e-12;
  double noise = 1e-3;
};

struct Gamma0Config {
  std::vector<int> N;
  std::vector<double> s;
};

/// Command-line overrides; empty fields leave the JSON value in place.
struct Overrides {
  std::optional<std::string> command;
  std::optional<std::string> config_path;
  std::optional<std::string> out;
  std::optional<std::string> seed;
  std::optional<int> threads;
  std::optional<std::string> N;
  std::optional<std::string> s;
  std::optional<std::string> gamma;
  std::optional<std::string> eps;
  std::optional<int> grid_points;
};

/// Reads the config file (if any), applies the overrides and checks that
/// every key is known to the selected command.
nlohmann::json merge_config(const Overrides& ov);

Common parse_common(const nlohmann::json& j);
EnergyConfig parse_energy(const nlohmann::json& j);
SpectrumConfig parse_spectrum(const nlohmann::json& j);
PhaseDiagramConfig parse_phase_diagram(const nlohmann::json& j);
MinimizeConfig parse_minimize(const nlohmann::json& j);
FlowConfig parse_flow(const nlohmann::json& j);
Gamma0Config parse_gamma0(const nlohmann::json& j);

}  // namespace cli
