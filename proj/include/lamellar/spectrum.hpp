#pragma once

#include <optional>
#include <vector>

#include "lamellar/kernels.hpp"
#include "lamellar/sharp_energy.hpp"

namespace lamellar {

/// First row a_0..a_{N-1} of a symmetric circulant matrix.
class CirculantRow {
 public:
  CirculantRow(int n, std::vector<double> entries);
  int n() const noexcept { return n_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

 private:
  int n_;
  std::vector<double> entries_;
};

enum class Stability { kLocalMin, kSaddle, kMarginal };
const char* to_string(Stability s);

struct SpectrumReport {
  int n = 0;
  std::vector<double> eigenvalues;
  Stability classification = Stability::kLocalMin;
  /// Empty for N = 2 (unbounded).
  std::optional<double> gamma0;
  /// min over ℓ ∉ {0, N/2}; empty for N = 2.
  std::optional<double> min_constrained;
  double tolerance = 0.0;
};

/// Hessian row at U_N: a_0 = 4Σ(-1)^k(K-G)(k/N), a_k = 4(-1)^{k-1}(K-G)(k/N).
CirculantRow circulant_row_at_UN(int N, const ModelParams& mp);
CirculantRow circulant_row_at_UN(int N, const SharpEnergy& energy);

/// λ_ℓ = Σ_k a_k cos(2πkℓ/N), with kℓ reduced mod N before the cosine.
std::vector<double> circulant_eigenvalues(const CirculantRow& row);

/// Closed forms of 16 Σ_{k=1}^{N-1} (-1)^{k-1} G(k/N) sin²(πkℓ/N)
/// as usually quoted: tan²(πℓ/N)/(γ²N) for ℓ ≠ N/2, -4/(3γ²N) at N/2.
double green_part_closed_form(int N, int l, const GreenParams& gp);

/// The trigonometric sum 16 Σ_{k=1}^{N-1} (-1)^{k-1} G(k/N) sin²(πkℓ/N).
double green_trig_sum(int N, int l, const GreenParams& gp);

/// The Green contribution to λ_ℓ, 8 Σ_{k=1}^{N-1} (-1)^{k-1} G(k/N) sin²(πkℓ/N),
/// in closed form: tan²(πℓ/N)/(γ²N) for ℓ ≠ N/2 and -2/(3γ²N) for ℓ = N/2.
double green_part(int N, int l, const GreenParams& gp);

/// H contribution to λ_ℓ: 8 Σ_{k=1}^{N-1} (-1)^k K(k/N) sin²(πkℓ/N).
double kernel_part(int N, int l, const KernelParams& kp);
double kernel_part(int N, int l, const PeriodicKernel& kernel);

/// tan(π/N) / (100 √s N^{1+s}); empty (unbounded) for N = 2.
std::optional<double> gamma0(int N, double s);

SpectrumReport classify(int N, const ModelParams& mp);

struct CriticalGammaResult {
  double gamma = 0.0;
  /// false if the scan saw more than one sign change of min λ.
  bool monotone = true;
  int sign_changes = 0;
};

/// Smallest γ in [1e-6, 1e3] at which min_{ℓ∉{0,N/2}} λ_ℓ changes sign,
/// located to 1e-10 relative. Throws kNoBracket if there is none.
CriticalGammaResult critical_gamma(int N, double s, int tail_terms = kDefaultTailTerms);

}  // namespace lamellar
