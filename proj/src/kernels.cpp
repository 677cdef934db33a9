#include "lamellar/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lamellar/error.hpp"

namespace lamellar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Σ_{j>=0} (A + 1/2 + j)^{-σ} by midpoint Euler-Maclaurin around A.
double midpoint_tail(double A, double sigma) {
  const double s2 = sigma - 1.0;
  return std::pow(A, -s2) / s2 - sigma * std::pow(A, -sigma - 1.0) / 24.0 +
         7.0 / 5760.0 * sigma * (sigma + 1.0) * (sigma + 2.0) * std::pow(A, -sigma - 3.0);
}

double midpoint_tail_remainder(double A, double sigma) {
  return 31.0 / 967680.0 * sigma * (sigma + 1.0) * (sigma + 2.0) * (sigma + 3.0) *
         (sigma + 4.0) * std::pow(A, -sigma - 5.0);
}

// Σ_{n=2}^{M} [(n - t)^{-σ} + (n + t)^{-σ}] plus the two tails, |t| <= 1.
double far_images(double t, double sigma, int M, double* remainder) {
  CompensatedSum acc;
  const double tail_minus = midpoint_tail(M + 0.5 - t, sigma);
  const double tail_plus = midpoint_tail(M + 0.5 + t, sigma);
  acc.add(tail_minus);
  acc.add(tail_plus);
  for (int n = M; n >= 2; --n) {
    acc.add(std::pow(n - t, -sigma));
    acc.add(std::pow(n + t, -sigma));
  }
  if (remainder) {
    *remainder = midpoint_tail_remainder(M + 0.5 - t, sigma) +
                 midpoint_tail_remainder(M + 0.5 + t, sigma);
  }
  return acc.value();
}

double clenshaw(const std::vector<double>& c, double t) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

// Chebyshev coefficients of the primitive, shifted so that it vanishes at 0.
std::vector<double> chebyshev_integral(const std::vector<double>& c) {
  const std::size_t n = c.size();
  std::vector<double> b(n + 1, 0.0);
  auto coef = [&](std::size_t k) { return k < n ? c[k] : 0.0; };
  b[1] = coef(0) - coef(2) / 2.0;
  for (std::size_t k = 2; k <= n; ++k) {
    b[k] = (coef(k - 1) - coef(k + 1)) / (2.0 * static_cast<double>(k));
  }
  b[0] = -clenshaw(b, 0.0);
  return b;
}

double sign_of(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace

KernelParams::KernelParams(double s, int tail_terms, double singularity_floor)
    : s_(s), tail_terms_(tail_terms), singularity_floor_(singularity_floor) {
  if (!(s > 0.0 && s < 0.5)) fail(ErrorCode::kDomain, "KernelParams: s must lie in (0, 1/2)");
  if (tail_terms < 1) fail(ErrorCode::kDomain, "KernelParams: tail_terms must be >= 1");
  if (!(singularity_floor > 0.0)) {
    fail(ErrorCode::kDomain, "KernelParams: singularity floor must be positive");
  }
}

GreenParams::GreenParams(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    fail(ErrorCode::kDomain, "GreenParams: gamma must be positive");
  }
}

double fold_periodic(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  // For r < 1/2 the argument is routed through fl(1 - r) so that x and
  // fl(1 - x) produce the same folded value (1 - y is exact for y >= 1/2).
  return r < 0.5 ? 1.0 - (1.0 - r) : 1.0 - r;
}

KernelSample kernel_sample(double x, const KernelParams& params) {
  const double a = fold_periodic(x);
  if (a < params.singularity_floor()) {
    fail(ErrorCode::kSingularity,
         "kernel_value: argument within the singularity floor of an integer");
  }
  const double sigma = 1.0 + 2.0 * params.s();
  const int M = params.tail_terms();
  CompensatedSum acc;
  acc.add(midpoint_tail(M + 0.5 - a, sigma));
  acc.add(midpoint_tail(M + 0.5 + a, sigma));
  for (int n = M; n >= 1; --n) {
    acc.add(std::pow(n + a, -sigma));
    acc.add(std::pow(n - a, -sigma));
  }
  acc.add(std::pow(a, -sigma));
  const double c = normalization_c1s(params.s());
  const double value = c * acc.value();
  const double remainder =
      c * (midpoint_tail_remainder(M + 0.5 - a, sigma) + midpoint_tail_remainder(M + 0.5 + a, sigma));
  return {value, remainder + 4.0 * kEps * value};
}

double kernel_value(double x, const KernelParams& params) {
  return kernel_sample(x, params).value;
}

double kernel_primitive(double t, double s) {
  if (!(s > 0.0 && s < 0.5)) fail(ErrorCode::kDomain, "kernel_primitive: s must lie in (0, 1/2)");
  return std::pow(std::fabs(t), 1.0 - 2.0 * s) / (2.0 * s * (1.0 - 2.0 * s));
}

double kernel_image_rectangle(double a, double b, double c, double d, double s, int n) {
  const double sh = static_cast<double>(n);
  return kernel_primitive(b - d - sh, s) + kernel_primitive(a - c - sh, s) -
         kernel_primitive(b - c - sh, s) - kernel_primitive(a - d - sh, s);
}

double green_value(double x, const GreenParams& params) {
  const double a = fold_periodic(x);
  return (a * a - a + 1.0 / 6.0) / (2.0 * params.gamma() * params.gamma());
}

double green_primitive(double t, const GreenParams& params) {
  if (!(std::fabs(t) <= 1.0)) fail(ErrorCode::kRange, "green_primitive: |t| > 1");
  const double g2 = params.gamma() * params.gamma();
  return (t * t * t / 3.0 - t * std::fabs(t) / 2.0 + t / 6.0) / (2.0 * g2);
}

double green_double_primitive(double t, const GreenParams& params) {
  if (!(std::fabs(t) <= 1.0)) fail(ErrorCode::kRange, "green_double_primitive: |t| > 1");
  const double g2 = params.gamma() * params.gamma();
  const double at = std::fabs(t);
  const double t2 = t * t;
  return -(t2 * t2 / 12.0 - at * t2 / 6.0 + t2 / 12.0) / (2.0 * g2);
}

double green_rectangle(double a, double b, double c, double d, const GreenParams& params) {
  return green_double_primitive(b - d, params) + green_double_primitive(a - c, params) -
         green_double_primitive(b - c, params) - green_double_primitive(a - d, params);
}

PeriodicKernel::PeriodicKernel(const KernelParams& params)
    : params_(params), c1s_(normalization_c1s(params.s())) {
  const double sigma = 1.0 + 2.0 * params.s();
  const int n = kChebyshevNodes;
  std::vector<double> samples(n);
  for (int j = 0; j < n; ++j) {
    const double t = std::cos(std::numbers::pi * (j + 0.5) / n);
    samples[j] = far_images(t, sigma, params.tail_terms(), nullptr);
  }
  far_.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    CompensatedSum acc;
    for (int j = 0; j < n; ++j) {
      acc.add(samples[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n));
    }
    far_[k] = 2.0 * acc.value() / n;
  }
  far_[0] /= 2.0;
  // The far field is even; odd coefficients are pure rounding noise.
  for (int k = 1; k < n; k += 2) far_[k] = 0.0;
  far_1_ = chebyshev_integral(far_);
  far_2_ = chebyshev_integral(far_1_);
}

double PeriodicKernel::far_field(double t) const { return clenshaw(far_, t); }

double PeriodicKernel::value(double t) const {
  const double a = fold_periodic(t);
  if (a < params_.singularity_floor()) {
    fail(ErrorCode::kSingularity, "kernel value within the singularity floor of an integer");
  }
  const double sigma = 1.0 + 2.0 * params_.s();
  const double near =
      std::pow(1.0 + a, -sigma) + std::pow(1.0 - a, -sigma) + std::pow(a, -sigma);
  return c1s_ * (near + far_field(a));
}

double PeriodicKernel::near_double_primitive(double t) const {
  const double s = params_.s();
  return kernel_primitive(t - 1.0, s) + kernel_primitive(t, s) + kernel_primitive(t + 1.0, s);
}

double PeriodicKernel::near_first_primitive(double t) const {
  const double s = params_.s();
  auto dphi = [s](double u) {
    return sign_of(u) * std::pow(std::fabs(u), -2.0 * s) / (2.0 * s);
  };
  // dphi(0) is the principal-value convention 0.
  auto safe = [&](double u) { return u == 0.0 ? 0.0 : dphi(u); };
  return safe(t - 1.0) + safe(t) + safe(t + 1.0);
}

double PeriodicKernel::double_primitive(double t) const {
  return near_double_primitive(t) - clenshaw(far_2_, t);
}

double PeriodicKernel::first_primitive(double t) const {
  return near_first_primitive(t) - clenshaw(far_1_, t);
}

double PeriodicKernel::rectangle(double a, double b, double c, double d) const {
  return c1s_ * (double_primitive(b - d) + double_primitive(a - c) - double_primitive(b - c) -
                 double_primitive(a - d));
}

double PeriodicKernel::segment(double a, double b, double z) const {
  return -c1s_ * (first_primitive(b - z) - first_primitive(a - z));
}

}  // namespace lamellar
