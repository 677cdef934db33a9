#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lamellar/profiles.hpp"
#include "lamellar/sharp_energy.hpp"

namespace lamellar {

namespace detail {
class RealFft;
}

inline constexpr double kMeanTolerance = 1e-12;
/// Relative rounding allowance of the energy-decrease test.
inline constexpr double kEnergySlack = 1e-13;

/// Samples u(j / M), j = 0..M-1, of a diffuse profile.
class GridState {
 public:
  /// M must be a power of two (>= 4); the sample mean must equal params.m().
  GridState(std::vector<double> values, const ModelParams& params);

  /// Adds the constant that makes the mean equal to params.m().
  static GridState from_samples(std::vector<double> values, const ModelParams& params);

  /// Step profile sampled with the right-continuous convention.
  static GridState from_step_profile(const StepProfile& p, std::size_t M, const ModelParams& params);

  std::size_t points() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  const ModelParams& params() const noexcept { return params_; }
  double mean() const;
  double max_abs() const;

  GridState with_params(const ModelParams& params) const;

 private:
  std::vector<double> values_;
  ModelParams params_;
};

struct FlowConfig {
  double dt = 0.1;
  /// κ; empty selects 2 ε^{-2s}.
  std::optional<double> stabilization;
  int max_steps = 10000;
  double energy_tolerance = 1e-12;
  /// Consecutive steps with |ΔE| below tolerance before stopping.
  int stall_window = 50;
  int max_halvings = 20;
  double overshoot_budget = 0.1;
  /// When false the double-well term is dropped from both step and energy.
  bool include_potential = true;
};

struct SpectralSymbols {
  std::vector<double> h;  // (2π|k|)^{2s}, 0 at k = 0
  std::vector<double> k;  // (2πγk)^{-2}, 0 at k = 0
};

/// Multipliers on the FFT index j with frequency j for j <= M/2, j - M above.
SpectralSymbols spectral_symbols(std::size_t M, const ModelParams& mp);

/// W(u) = (1 - u²)² / 4.
double double_well(double u);
double double_well_derivative(double u);

struct TraceRow {
  int step;
  double dt;
  EnergyBreakdown energy;
};

struct StepOutcome {
  GridState state;
  double dt;      // accepted step
  int halvings;   // rejected trials before acceptance
  EnergyBreakdown energy;
};

struct FlowResult {
  GridState state;
  std::vector<TraceRow> trace;  // row 0 is the initial state
  bool converged = false;
  int steps = 0;
  int rejected = 0;
  double max_mean_drift = 0.0;
  double max_abs = 0.0;
};

/// Owns the transform workspace and symbols for one trajectory.
class PhaseFieldSolver {
 public:
  PhaseFieldSolver(std::size_t M, const ModelParams& params);
  ~PhaseFieldSolver();
  PhaseFieldSolver(const PhaseFieldSolver&) = delete;
  PhaseFieldSolver& operator=(const PhaseFieldSolver&) = delete;

  const SpectralSymbols& symbols() const noexcept { return symbols_; }

  EnergyBreakdown energy(const std::vector<double>& u, bool include_potential = true);

  /// One semi-implicit trial step of size dt without the accept rule.
  std::vector<double> trial(const std::vector<double>& u, double dt, double kappa,
                            bool include_potential);

  /// Trial steps with halving until the energy does not increase.
  StepOutcome step(const GridState& state, const FlowConfig& cfg, double dt);

  FlowResult run(const GridState& state, const FlowConfig& cfg);

 private:
  std::size_t M_;
  ModelParams params_;
  SpectralSymbols symbols_;
  std::unique_ptr<detail::RealFft> fft_;
  std::vector<std::complex<double>> spec_;
  std::vector<std::complex<double>> spec_nl_;
  std::vector<double> work_;
};

/// Non-increasing up to kEnergySlack relative rounding allowance.
bool energy_trace_monotone(const std::vector<TraceRow>& trace);

EnergyBreakdown energy_eps(const GridState& state, bool include_potential = true);
GridState flow_step(const GridState& state, const FlowConfig& cfg);
FlowResult run_flow(const GridState& state, const FlowConfig& cfg);

struct GammaLimitRecord {
  double epsilon;
  EnergyBreakdown energy;
  /// Empty when the relaxed state has fewer than N sign changes; the three
  /// fields below are then NaN.
  std::optional<StepProfile> nearest;
  double distance;    // L² distance of the grid interpolant to `nearest`
  double sharp_energy;  // E(nearest)
  double energy_gap;  // E_ε(u_ε) - E(nearest)
  int steps;
  bool converged;
  bool energy_monotone;
  double max_mean_drift;
  std::vector<TraceRow> trace;
};

/// Relaxes at each ε of a strictly decreasing schedule, warm-starting from
/// the previous relaxed state, and compares with the nearest A_N profile.
std::vector<GammaLimitRecord> gamma_limit_experiment(const std::vector<double>& eps_schedule,
                                                     const GridState& base, const FlowConfig& cfg,
                                                     int target_N,
                                                     GridState* final_state = nullptr);

/// Binary checkpoint: "LLPF", u32 version, u32 M, M float64, little-endian.
void save_checkpoint(const std::string& path, const std::vector<double>& values);
std::vector<double> load_checkpoint(const std::string& path);

}  // namespace lamellar
