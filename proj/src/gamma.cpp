#include <array>
#include <cmath>
#include <numbers>

#include "lamellar/error.hpp"
#include "lamellar/kernels.hpp"

namespace lamellar {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma_function(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::kDomain, "gamma: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) {
    fail(ErrorCode::kDomain, "gamma: pole at non-positive integer");
  }
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_function(1.0 - x));
  }
  const double z = x - 1.0;
  double acc = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    acc += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double normalization_c1s(double s) {
  if (!(s > 0.0 && s < 0.5)) fail(ErrorCode::kDomain, "normalization_c1s: s must lie in (0, 1/2)");
  const double num = std::exp2(2.0 * s) * gamma_function(0.5 + s);
  const double den = std::fabs(gamma_function(-s)) * std::sqrt(std::numbers::pi);
  return num / den;
}

}  // namespace lamellar
