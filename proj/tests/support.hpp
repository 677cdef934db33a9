#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lamellar/profiles.hpp"

namespace test_support {

inline double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

// Sorted interfaces in (margin, 1 - margin) with every gap at least min_gap.
inline std::vector<double> random_interfaces(std::mt19937_64& rng, int N, double min_gap = 0.03,
                                             double margin = 0.02) {
  std::uniform_real_distribution<double> U(margin, 1.0 - margin);
  while (true) {
    std::vector<double> x(N);
    for (double& v : x) v = U(rng);
    std::sort(x.begin(), x.end());
    bool ok = true;
    for (int i = 1; i < N; ++i) ok = ok && x[i] - x[i - 1] >= min_gap;
    ok = ok && (x.front() + 1.0 - x.back()) >= min_gap;
    if (ok) return x;
  }
}

inline lamellar::StepProfile random_profile(std::mt19937_64& rng, int N, double min_gap = 0.03) {
  while (true) {
    auto x = random_interfaces(rng, N, min_gap);
    const double m = lamellar::mass_of_interfaces(x);
    if (m > -0.9 && m < 0.9) return lamellar::StepProfile(std::move(x));
  }
}

// Re-expresses the profile translated by tau in A_N (blocks wrap around 0).
// Returns false if the translated profile does not start with a +1 block.
inline bool translated(const lamellar::StepProfile& p, double tau, std::vector<double>& out) {
  std::vector<double> x;
  for (double v : p.interfaces()) {
    double y = v + tau;
    y -= std::floor(y);
    x.push_back(y);
  }
  std::sort(x.begin(), x.end());
  out = x;
  return lamellar::evaluate(p, -tau) == 1;
}

}  // namespace test_support
