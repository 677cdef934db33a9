#include "lamellar/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lamellar/error.hpp"

namespace lamellar {

namespace {

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double min_gap(const std::vector<double>& x) {
  double g = x.front() + 1.0 - x.back();
  for (std::size_t i = 1; i < x.size(); ++i) g = std::min(g, x[i] - x[i - 1]);
  return std::min({g, x.front(), 1.0 - x.back()});
}

}  // namespace

TangentVector tangent_noise(int N, double amplitude, std::uint64_t seed) {
  if (N < 2 || N % 2 != 0) fail(ErrorCode::kDomain, "tangent_noise: N must be even and >= 2");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    fail(ErrorCode::kDomain, "tangent_noise: amplitude must be non-negative");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> w(N);
  for (double& v : w) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = 2.0 * unit - 1.0;
  }
  double alt = 0.0;
  double mean = 0.0;
  for (int k = 0; k < N; ++k) {
    alt += (k % 2 == 0 ? 1.0 : -1.0) * w[k];
    mean += w[k];
  }
  alt /= N;
  mean /= N;
  for (int k = 0; k < N; ++k) w[k] -= (k % 2 == 0 ? alt : -alt) + mean;
  const double norm = max_norm(w);
  for (double& v : w) v = norm > 0.0 ? amplitude * v / norm : 0.0;
  return tangent_project(w);
}

const char* to_string(DescentStatus status) {
  switch (status) {
    case DescentStatus::kConverged: return "converged";
    case DescentStatus::kIterationCap: return "iteration_cap";
    case DescentStatus::kBoundary: return "boundary";
  }
  return "unknown";
}

DescentResult projected_descent(const SharpEnergy& energy, const StepProfile& start,
                                const DescentConfig& cfg) {
  StepProfile current = start;
  double e = energy.energy(current).total;
  auto dir = tangent_project(energy.gradient(current)).components();
  for (double& v : dir) v = -v;
  double gnorm = max_norm(dir);

  DescentResult result{start, start, DescentStatus::kIterationCap, 0, {}};
  result.trace.push_back({0, 0.0, e, gnorm});
  double alpha = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    if (gnorm < cfg.gradient_tolerance) {
      result.status = DescentStatus::kConverged;
      break;
    }
    const auto& x = current.interfaces();
    const double gap = min_gap(x);
    if (gap < cfg.min_gap) {
      result.status = DescentStatus::kBoundary;
      break;
    }
    // Never move an interface by more than a quarter of the smallest gap.
    alpha = std::min(alpha, 0.25 * gap / gnorm);
    const double slope = -dot(dir, dir);
    const double noise = 1024.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(e));
    bool accepted = false;
    for (int h = 0; h <= cfg.max_halvings; ++h, alpha *= 0.5) {
      const StepProfile trial = perturb(current, TangentVector(dir), alpha);
      const double et = energy.energy(trial).total;
      // Below rounding resolution the energy comparison is noise; fall back on the gradient.
      const bool resolved = alpha * std::fabs(slope) > noise;
      bool ok = resolved && et <= e + cfg.armijo * alpha * slope;
      std::vector<double> g_trial;
      if (!ok && !resolved && et <= e + noise) {
        g_trial = energy.gradient(trial);
        ok = std::fabs(dot(g_trial, dir)) <= 0.9 * std::fabs(slope);
      }
      if (!ok) continue;
      current = trial;
      e = et;
      if (g_trial.empty()) g_trial = energy.gradient(current);
      dir = tangent_project(g_trial).components();
      for (double& v : dir) v = -v;
      gnorm = max_norm(dir);
      result.iterations = it;
      result.trace.push_back({it, alpha, e, gnorm});
      accepted = true;
      break;
    }
    if (!accepted) fail(ErrorCode::kLineSearch, "projected_descent: line search exhausted its halvings");
    alpha *= 2.0;
  }
  if (result.status == DescentStatus::kIterationCap && gnorm < cfg.gradient_tolerance) {
    result.status = DescentStatus::kConverged;
  }
  result.final_profile = current;
  return result;
}

}  // namespace lamellar
