#pragma once

#include <cstdint>
#include <vector>

#include "lamellar/profiles.hpp"
#include "lamellar/sharp_energy.hpp"

namespace lamellar {

/// Seeded tangent perturbation: uniform components, projected off the
/// constraint normal (1,-1,...) and off the translation (1,...,1), then
/// scaled to max-norm `amplitude`. Zero when N = 2 (no such direction).
TangentVector tangent_noise(int N, double amplitude, std::uint64_t seed);

struct DescentConfig {
  int max_iterations = 20000;
  double gradient_tolerance = 1e-9;
  int max_halvings = 60;
  double armijo = 1e-4;
  /// Stop when two interfaces come closer than this.
  double min_gap = 1e-9;
};

enum class DescentStatus { kConverged, kIterationCap, kBoundary };

struct DescentStep {
  int iteration;
  double step;
  double energy;
  double gradient_norm;
};

struct DescentResult {
  StepProfile initial;
  StepProfile final_profile;
  DescentStatus status;
  int iterations;  // accepted steps
  std::vector<DescentStep> trace;  // entry 0 is the initial state
};

/// Projected steepest descent on energy_total with backtracking. A trial is
/// accepted on sufficient decrease, or, once decreases drop below
/// floating-point resolution, on a non-increasing energy together with a
/// curvature condition on the directional derivative.
DescentResult projected_descent(const SharpEnergy& energy, const StepProfile& start,
                                const DescentConfig& cfg = {});

const char* to_string(DescentStatus status);

}  // namespace lamellar
