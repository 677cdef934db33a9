#pragma once

#include <cstddef>
#include <vector>

#include "lamellar/kernels.hpp"
#include "lamellar/profiles.hpp"

namespace lamellar {

class ModelParams {
 public:
  ModelParams(double s, double gamma, double m = 0.0, double epsilon = 1.0,
              int tail_terms = kDefaultTailTerms);

  double s() const noexcept { return s_; }
  double gamma() const noexcept { return gamma_; }
  double m() const noexcept { return m_; }
  double epsilon() const noexcept { return epsilon_; }
  int tail_terms() const noexcept { return tail_terms_; }

  KernelParams kernel_params() const { return KernelParams(s_, tail_terms_); }
  GreenParams green_params() const { return GreenParams(gamma_); }

  ModelParams with_gamma(double gamma) const;
  ModelParams with_epsilon(double epsilon) const;

 private:
  double s_;
  double gamma_;
  double m_;
  double epsilon_;
  int tail_terms_;
};

struct EnergyBreakdown {
  double h = 0.0;
  double w = 0.0;
  double k = 0.0;
  double total = 0.0;
};

/// Row-major square matrix.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct GradientParts {
  std::vector<double> h;  // ∂H/∂x_i
  std::vector<double> k;  // ∂K/∂x_i
};

/// Sharp-interface energy E = H + K of step profiles. Holds the tabulated
/// periodic kernel, so one instance should serve many evaluations.
///
/// Energies use the profile's own mass; ModelParams::m is irrelevant here
/// because every A_N profile carries its mass in its interfaces.
class SharpEnergy {
 public:
  explicit SharpEnergy(const ModelParams& params);

  const ModelParams& params() const noexcept { return params_; }
  const PeriodicKernel& kernel() const noexcept { return kernel_; }

  double h(const StepProfile& p) const;
  double k(const StepProfile& p) const;
  EnergyBreakdown energy(const StepProfile& p) const;

  GradientParts gradient_parts(const StepProfile& p) const;
  std::vector<double> gradient(const StepProfile& p) const;
  DenseMatrix hessian(const StepProfile& p) const;

  /// λ from the first interface; throws kNotCritical when the gradient is
  /// not λ-proportional to the constraint normal within 1e-8·max(1, |λ|).
  double lagrange_multiplier(const StepProfile& p) const;

  /// (K - G)(t), the interaction entering Hessian and spectrum.
  double kernel_minus_green(double t) const;

 private:
  ModelParams params_;
  PeriodicKernel kernel_;
  GreenParams green_;
};

double energy_H(const StepProfile& p, const KernelParams& kp);
double energy_K(const StepProfile& p, const GreenParams& gp);
EnergyBreakdown energy_total(const StepProfile& p, const ModelParams& mp);
std::vector<double> grad_E(const StepProfile& p, const ModelParams& mp);
DenseMatrix hessian_E(const StepProfile& p, const ModelParams& mp);
double lagrange_multiplier(const StepProfile& p, const ModelParams& mp);

}  // namespace lamellar
