#include "lamellar/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lamellar/error.hpp"

namespace lamellar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_unit(double x) {
  if (x >= 0.0 && x <= 1.0) return x;
  return x - std::floor(x);
}

}  // namespace

double PotentialSeries::evaluate(double x) const {
  double acc = 0.0;
  for (int k = modes; k >= 1; --k) {
    const double th = kTwoPi * k * x;
    acc += cosine_coefficients[k - 1] * std::cos(th) + sine_coefficients[k - 1] * std::sin(th);
  }
  return acc;
}

double PotentialSeries::derivative(double x) const {
  double acc = 0.0;
  for (int k = modes; k >= 1; --k) {
    const double th = kTwoPi * k * x;
    acc += kTwoPi * k *
           (sine_coefficients[k - 1] * std::cos(th) - cosine_coefficients[k - 1] * std::sin(th));
  }
  return acc;
}

double v_explicit(double x, int N, const GreenParams& gp) {
  const StepProfile u = make_equidistributed(N);
  const double t = reduce_unit(x);
  double acc = -1.0 / (8.0 * N * N) + t * t / 2.0;
  const auto& xs = u.interfaces();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (t < xs[k]) break;
    const double d = t - xs[k];
    acc += (k % 2 == 0 ? -1.0 : 1.0) * d * d;
  }
  return -acc / (gp.gamma() * gp.gamma());
}

double vprime_explicit(double x, int N, const GreenParams& gp) {
  const StepProfile u = make_equidistributed(N);
  const double t = reduce_unit(x);
  double acc = t;
  const auto& xs = u.interfaces();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (t < xs[k]) break;
    acc += (k % 2 == 0 ? -2.0 : 2.0) * (t - xs[k]);
  }
  return -acc / (gp.gamma() * gp.gamma());
}

PotentialSeries v_fourier(const StepProfile& p, const GreenParams& gp, int modes) {
  if (modes < 1) fail(ErrorCode::kDomain, "v_fourier: modes must be >= 1");
  const auto bl = blocks(p);
  PotentialSeries out;
  out.modes = modes;
  out.cosine_coefficients.resize(modes);
  out.sine_coefficients.resize(modes);
  for (int k = 1; k <= modes; ++k) {
    const double w = kTwoPi * k;
    double fc = 0.0;
    double fs = 0.0;
    for (const Block& b : bl) {
      fc += b.sign * (std::sin(w * b.hi) - std::sin(w * b.lo));
      fs += b.sign * (std::cos(w * b.lo) - std::cos(w * b.hi));
    }
    fc *= 2.0 / w;
    fs *= 2.0 / w;
    const double sym = gp.gamma() * w;
    out.cosine_coefficients[k - 1] = fc / (sym * sym);
    out.sine_coefficients[k - 1] = fs / (sym * sym);
  }
  return out;
}

double series_energy(const PotentialSeries& v, const GreenParams& gp) {
  double acc = 0.0;
  for (int k = v.modes; k >= 1; --k) {
    const double sym = gp.gamma() * kTwoPi * k;
    const double a = v.cosine_coefficients[k - 1];
    const double b = v.sine_coefficients[k - 1];
    acc += sym * sym * (a * a + b * b);
  }
  return 0.25 * acc;
}

ExactPotential::ExactPotential(const StepProfile& p, const GreenParams& gp)
    : blocks_(lamellar::blocks(p)), mass_(p.mass()) {
  const double g2 = gp.gamma() * gp.gamma();
  const std::size_t nb = blocks_.size();
  c_.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) c_[b] = (blocks_[b].sign - mass_) / g2;

  // v'(0) = γ^{-2} ∫_0^1 (1 - y)(u - m) dy makes v(1) = v(0).
  double slope = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const double lo = blocks_[b].lo;
    const double hi = blocks_[b].hi;
    slope += c_[b] * ((hi - lo) - 0.5 * (hi * hi - lo * lo));
  }
  v0_.resize(nb);
  d0_.resize(nb);
  double v = 0.0;
  double d = slope;
  double integral = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    v0_[b] = v;
    d0_[b] = d;
    const double L = blocks_[b].hi - blocks_[b].lo;
    integral += v * L + d * L * L / 2.0 - c_[b] * L * L * L / 6.0;
    v += d * L - c_[b] * L * L / 2.0;
    d -= c_[b] * L;
  }
  for (double& x : v0_) x -= integral;
}

std::size_t ExactPotential::locate(double x) const {
  std::size_t b = 0;
  while (b + 1 < blocks_.size() && x >= blocks_[b].hi) ++b;
  return b;
}

double ExactPotential::value(double x) const {
  const double t = reduce_unit(x);
  const std::size_t b = locate(t);
  const double dx = t - blocks_[b].lo;
  return v0_[b] + d0_[b] * dx - c_[b] * dx * dx / 2.0;
}

double ExactPotential::derivative(double x) const {
  const double t = reduce_unit(x);
  const std::size_t b = locate(t);
  return d0_[b] - c_[b] * (t - blocks_[b].lo);
}

double ExactPotential::block_integral(std::size_t b) const {
  const double L = blocks_.at(b).hi - blocks_[b].lo;
  return v0_[b] * L + d0_[b] * L * L / 2.0 - c_[b] * L * L * L / 6.0;
}

double K_from_v(const StepProfile& p, const GreenParams& gp) {
  const ExactPotential v(p, gp);
  double acc = 0.0;
  for (std::size_t b = 0; b < v.blocks().size(); ++b) {
    acc += (v.blocks()[b].sign - v.mass()) * v.block_integral(b);
  }
  return 0.5 * acc;
}

}  // namespace lamellar
