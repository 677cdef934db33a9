#pragma once

#include <array>
#include <vector>

namespace lamellar {

inline constexpr int kDefaultTailTerms = 1000;
inline constexpr double kDefaultSingularityFloor = 1e-12;

/// Order of the periodic fractional kernel and its lattice-sum truncation.
class KernelParams {
 public:
  explicit KernelParams(double s, int tail_terms = kDefaultTailTerms,
                        double singularity_floor = kDefaultSingularityFloor);

  double s() const noexcept { return s_; }
  int tail_terms() const noexcept { return tail_terms_; }
  double singularity_floor() const noexcept { return singularity_floor_; }

 private:
  double s_;
  int tail_terms_;
  double singularity_floor_;
};

class GreenParams {
 public:
  explicit GreenParams(double gamma);
  double gamma() const noexcept { return gamma_; }

 private:
  double gamma_;
};

/// Lanczos approximation (g = 7, nine terms) with reflection for x < 1/2.
/// Poles at non-positive integers raise a domain error.
double gamma_function(double x);

/// C_{1,s} = 2^{2s} Γ((1+2s)/2) / (|Γ(-s)| √π), s in (0, 1/2).
double normalization_c1s(double s);

/// Folds x onto [0, 1/2] using the period and the reflection x -> 1-x.
/// kernel and Green evaluations at x and at 1-x go through the same
/// folded argument, so they agree bit for bit.
double fold_periodic(double x);

struct KernelSample {
  double value;
  /// Euler-Maclaurin remainder of the tail plus a summation rounding
  /// allowance; doubling tail_terms moves value by less than this.
  double tail_bound;
};

/// Direct lattice sum C_{1,s} Σ_{|n|<=M} |x-n|^{-1-2s} with a midpoint
/// Euler-Maclaurin tail for |n| > M.
KernelSample kernel_sample(double x, const KernelParams& params);
double kernel_value(double x, const KernelParams& params);

/// Φ_s(t) = |t|^{1-2s} / (2s(1-2s)); Φ_s'' = -|t|^{-1-2s} away from 0.
double kernel_primitive(double t, double s);

/// ∬_{[a,b]×[c,d]} |x - y - n|^{-1-2s} dx dy via the mixed difference of Φ_s.
/// Valid whenever the rectangle does not straddle the line x - y = n.
double kernel_image_rectangle(double a, double b, double c, double d, double s,
                              int n);

/// G(x) = (x² - |x| + 1/6) / (2γ²) on [-1, 1], extended 1-periodically.
double green_value(double x, const GreenParams& params);

/// G1(t) with G1' = G on [-1, 1], G1(0) = 0. Range error for |t| > 1.
double green_primitive(double t, const GreenParams& params);

/// Ψ(t) = -(t⁴/12 - |t|³/6 + t²/12) / (2γ²); Ψ'' = -G on [-1, 1].
/// Range error for |t| > 1.
double green_double_primitive(double t, const GreenParams& params);

/// ∬_{[a,b]×[c,d]} G(x - y) dx dy. All corner differences must lie in
/// [-1, 1]; otherwise the rectangle spans more than one period (range error).
double green_rectangle(double a, double b, double c, double d,
                       const GreenParams& params);

/// The full periodic kernel K(t) = C_{1,s} Σ_n |t - n|^{-1-2s} together with
/// its first and second primitives on [-1, 1].
///
/// The images n = -1, 0, 1 are handled in closed form through Φ_s. The
/// remaining images form a function analytic on [-1, 1] (nearest
/// singularities at ±2); it is sampled once by direct lattice summation
/// (tail_terms images plus the Euler-Maclaurin tail) and stored as a
/// Chebyshev series, which is integrated twice exactly. Rectangle and
/// segment integrals are then O(1) and free of the large cancellations a
/// per-image primitive sum would suffer.
class PeriodicKernel {
 public:
  explicit PeriodicKernel(const KernelParams& params);

  const KernelParams& params() const noexcept { return params_; }
  double c1s() const noexcept { return c1s_; }

  /// K(t), t not within the singularity floor of an integer.
  double value(double t) const;

  /// ∬_{[a,b]×[c,d]} K(x - y) dx dy for a <= b, c <= d in [0, 1] whose
  /// intervals overlap at most in an endpoint.
  double rectangle(double a, double b, double c, double d) const;

  /// Principal value ∫_a^b K(x - z) dx for a <= b and z in [0, 1]. The
  /// singular endpoint contribution at x = z is dropped (symmetric limit).
  double segment(double a, double b, double z) const;

  /// Smooth remainder Σ_{|n|>=2} |t-n|^{-1-2s} (without C_{1,s}).
  double far_field(double t) const;

 private:
  static constexpr int kChebyshevNodes = 48;

  double near_double_primitive(double t) const;
  double near_first_primitive(double t) const;
  double double_primitive(double t) const;
  double first_primitive(double t) const;

  KernelParams params_;
  double c1s_;
  std::vector<double> far_;     // Chebyshev coefficients of the far field
  std::vector<double> far_1_;   // ... of its primitive vanishing at 0
  std::vector<double> far_2_;   // ... of its double primitive vanishing at 0
};

}  // namespace lamellar
