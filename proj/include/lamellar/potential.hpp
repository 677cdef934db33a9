#pragma once

#include <vector>

#include "lamellar/kernels.hpp"
#include "lamellar/profiles.hpp"

namespace lamellar {

inline constexpr int kDefaultPotentialModes = 4096;

/// v(x) ≈ Σ_{k=1}^{modes} v_k cos(2πkx) + ṽ_k sin(2πkx); no constant mode.
struct PotentialSeries {
  int modes = 0;
  std::vector<double> cosine_coefficients;  // v_1..v_modes
  std::vector<double> sine_coefficients;    // ṽ_1..ṽ_modes

  double evaluate(double x) const;
  double derivative(double x) const;
};

/// Closed-form potential of U_N at m = 0 on [0, 1] (periodically extended).
double v_explicit(double x, int N, const GreenParams& gp);
double vprime_explicit(double x, int N, const GreenParams& gp);

/// Fourier series of v = (-γ²Δ)^{-1}(u - m) with exact source coefficients.
PotentialSeries v_fourier(const StepProfile& p, const GreenParams& gp,
                          int modes = kDefaultPotentialModes);

/// K(u) = ¼ Σ (2πγk)² (v_k² + ṽ_k²) for the truncated series.
double series_energy(const PotentialSeries& v, const GreenParams& gp);

/// Exact piecewise-quadratic solution of -γ² v'' = u - m, periodic and mean
/// free, for an arbitrary step profile.
class ExactPotential {
 public:
  ExactPotential(const StepProfile& p, const GreenParams& gp);

  double value(double x) const;
  double derivative(double x) const;
  /// ∫_lo^hi v for a sub-interval of one block.
  double block_integral(std::size_t block) const;
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  double mass() const noexcept { return mass_; }

 private:
  std::size_t locate(double x) const;

  std::vector<Block> blocks_;
  std::vector<double> v0_;  // v at each block's left end
  std::vector<double> d0_;  // v' at each block's left end
  std::vector<double> c_;   // (σ_b - m) / γ², so v'' = -c on block b
  double mass_;
};

/// K = ½ ∫ (u - m) v, integrated exactly block by block.
double K_from_v(const StepProfile& p, const GreenParams& gp);

}  // namespace lamellar
