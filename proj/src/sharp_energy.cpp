#include "lamellar/sharp_energy.hpp"

#include <algorithm>
#include <cmath>

#include "lamellar/error.hpp"

namespace lamellar {

namespace {

double alt(std::size_t i) { return i % 2 == 0 ? 1.0 : -1.0; }

double green_rect_sum(const std::vector<Block>& bl, const GreenParams& gp) {
  double acc = 0.0;
  for (const Block& I : bl) {
    if (I.sign < 0) continue;
    for (const Block& J : bl) {
      if (J.sign > 0) continue;
      acc += green_rectangle(I.lo, I.hi, J.lo, J.hi, gp);
    }
  }
  return acc;
}

}  // namespace

ModelParams::ModelParams(double s, double gamma, double m, double epsilon, int tail_terms)
    : s_(s), gamma_(gamma), m_(m), epsilon_(epsilon), tail_terms_(tail_terms) {
  if (!(s > 0.0 && s < 0.5)) fail(ErrorCode::kDomain, "ModelParams: s must lie in (0, 1/2)");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail(ErrorCode::kDomain, "ModelParams: gamma must be positive");
  if (!(m > -1.0 && m < 1.0)) fail(ErrorCode::kDomain, "ModelParams: m must lie in (-1, 1)");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    fail(ErrorCode::kDomain, "ModelParams: epsilon must be positive");
  }
  if (tail_terms < 1) fail(ErrorCode::kDomain, "ModelParams: tail_terms must be >= 1");
}

ModelParams ModelParams::with_gamma(double gamma) const {
  return ModelParams(s_, gamma, m_, epsilon_, tail_terms_);
}

ModelParams ModelParams::with_epsilon(double epsilon) const {
  return ModelParams(s_, gamma_, m_, epsilon, tail_terms_);
}

SharpEnergy::SharpEnergy(const ModelParams& params)
    : params_(params), kernel_(params.kernel_params()), green_(params.green_params()) {}

double SharpEnergy::h(const StepProfile& p) const {
  const auto bl = blocks(p);
  double acc = 0.0;
  for (const Block& I : bl) {
    if (I.sign < 0) continue;
    for (const Block& J : bl) {
      if (J.sign > 0) continue;
      acc += kernel_.rectangle(I.lo, I.hi, J.lo, J.hi);
    }
  }
  return 2.0 * acc;
}

double SharpEnergy::k(const StepProfile& p) const {
  return -2.0 * green_rect_sum(blocks(p), green_);
}

EnergyBreakdown SharpEnergy::energy(const StepProfile& p) const {
  EnergyBreakdown e;
  e.h = h(p);
  e.k = k(p);
  e.w = 0.0;
  e.total = e.h + e.k;
  return e;
}

GradientParts SharpEnergy::gradient_parts(const StepProfile& p) const {
  const auto bl = blocks(p);
  const auto& x = p.interfaces();
  GradientParts g;
  g.h.resize(x.size());
  g.k.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double kint = 0.0;
    double gint = 0.0;
    for (const Block& b : bl) {
      kint += b.sign * kernel_.segment(b.lo, b.hi, x[i]);
      gint += b.sign * (green_primitive(b.hi - x[i], green_) - green_primitive(b.lo - x[i], green_));
    }
    // 1-based index i + 1, so (-1)^{i+1} = -alt(i).
    g.h[i] = -2.0 * alt(i) * kint;
    g.k[i] = 2.0 * alt(i) * gint;
  }
  return g;
}

std::vector<double> SharpEnergy::gradient(const StepProfile& p) const {
  auto parts = gradient_parts(p);
  for (std::size_t i = 0; i < parts.h.size(); ++i) parts.h[i] += parts.k[i];
  return parts.h;
}

double SharpEnergy::kernel_minus_green(double t) const {
  return kernel_.value(t) - green_value(t, green_);
}

DenseMatrix SharpEnergy::hessian(const StepProfile& p) const {
  const auto& x = p.interfaces();
  const std::size_t n = x.size();
  DenseMatrix pair(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel_minus_green(x[i] - x[j]);
      pair(i, j) = v;
      pair(j, i) = v;
    }
  }
  DenseMatrix hess(n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double sgn = alt(i + j);  // (-1)^{i+j} in 0- and 1-based alike
      hess(i, j) = -4.0 * sgn * pair(i, j);
      diag += 4.0 * sgn * pair(i, j);
    }
    hess(i, i) = diag;
  }
  return hess;
}

double SharpEnergy::lagrange_multiplier(const StepProfile& p) const {
  const auto g = gradient(p);
  const double lambda = -0.5 * g[0];
  double residual = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    residual = std::max(residual, std::fabs(g[i] + 2.0 * alt(i) * lambda));
  }
  if (residual > 1e-8 * std::max(1.0, std::fabs(lambda))) {
    fail(ErrorCode::kNotCritical, "lagrange_multiplier: profile is not a constrained critical point");
  }
  return lambda;
}

double energy_H(const StepProfile& p, const KernelParams& kp) {
  const PeriodicKernel kernel(kp);
  const auto bl = blocks(p);
  double acc = 0.0;
  for (const Block& I : bl) {
    if (I.sign < 0) continue;
    for (const Block& J : bl) {
      if (J.sign > 0) continue;
      acc += kernel.rectangle(I.lo, I.hi, J.lo, J.hi);
    }
  }
  return 2.0 * acc;
}

double energy_K(const StepProfile& p, const GreenParams& gp) {
  return -2.0 * green_rect_sum(blocks(p), gp);
}

EnergyBreakdown energy_total(const StepProfile& p, const ModelParams& mp) {
  return SharpEnergy(mp).energy(p);
}

std::vector<double> grad_E(const StepProfile& p, const ModelParams& mp) {
  return SharpEnergy(mp).gradient(p);
}

DenseMatrix hessian_E(const StepProfile& p, const ModelParams& mp) {
  return SharpEnergy(mp).hessian(p);
}

double lagrange_multiplier(const StepProfile& p, const ModelParams& mp) {
  return SharpEnergy(mp).lagrange_multiplier(p);
}

}  // namespace lamellar
