#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "capi.hpp"
#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lamellar phase stability: sharp-interface energies, spectra, descent and phase-field flows"};
  app.set_version_flag("--version", std::string(lam_version()));
  cli::Overrides ov;
  std::string command;
  app.add_option("command", command, "energy | spectrum | phase-diagram | minimize | flow | gamma0");
  std::string config_path, out, seed, N, s, gamma, eps;
  int threads = 0, grid_points = 0;
  auto* o_config = app.add_option("--config", config_path, "JSON run configuration");
  auto* o_out = app.add_option("--out", out, "output path (flow: file prefix)");
  auto* o_seed = app.add_option("--seed", seed, "random seed (unsigned 64-bit)");
  auto* o_threads = app.add_option("--threads", threads, "worker threads");
  auto* o_N = app.add_option("--N", N, "comma-separated N list");
  auto* o_s = app.add_option("--s", s, "fractional order(s), comma-separated");
  auto* o_gamma = app.add_option("--gamma", gamma, "gamma value(s), comma-separated");
  auto* o_eps = app.add_option("--eps", eps, "epsilon schedule, comma-separated, decreasing");
  auto* o_grid = app.add_option("--grid-points", grid_points, "phase-field grid size (power of two)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitUsage;
  }
  if (!command.empty()) ov.command = command;
  if (*o_config) ov.config_path = config_path;
  if (*o_out) ov.out = out;
  if (*o_seed) ov.seed = seed;
  if (*o_threads) ov.threads = threads;
  if (*o_N) ov.N = N;
  if (*o_s) ov.s = s;
  if (*o_gamma) ov.gamma = gamma;
  if (*o_eps) ov.eps = eps;
  if (*o_grid) ov.grid_points = grid_points;

  static const std::map<std::string, int (*)(const nlohmann::json&)> commands = {
      {"energy", cli::cmd_energy},   {"spectrum", cli::cmd_spectrum}, {"phase-diagram", cli::cmd_phase_diagram},
      {"minimize", cli::cmd_minimize}, {"flow", cli::cmd_flow},       {"gamma0", cli::cmd_gamma0},
  };
  try {
    const nlohmann::json cfg = cli::merge_config(ov);
    return commands.at(cfg.at("command").get<std::string>())(cfg);
  } catch (const cli::CliError& e) {
    std::cerr << "lamellar: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "lamellar: " << e.what() << "\n";
    return cli::kExitNumerical;
  }
}
