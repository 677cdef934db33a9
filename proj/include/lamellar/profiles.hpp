#pragma once

#include <cstddef>
#include <vector>

namespace lamellar {

inline constexpr double kMassTolerance = 1e-12;

/// Alternating-sign perturbation direction orthogonal to (1,-1,...,1,-1).
class TangentVector {
 public:
  explicit TangentVector(std::vector<double> components);

  const std::vector<double>& components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }

 private:
  std::vector<double> components_;
};

/// Step function u = 1 + 2 Σ (-1)^k H(x - x_k) on [0, 1) with N (even)
/// strictly increasing interfaces in (0, 1); +1 on the first block.
class StepProfile {
 public:
  /// Mass derived from the interfaces.
  explicit StepProfile(std::vector<double> interfaces);
  /// Stored mass must agree with the derived one to kMassTolerance.
  StepProfile(std::vector<double> interfaces, double mass);

  std::size_t n_interfaces() const noexcept { return interfaces_.size(); }
  const std::vector<double>& interfaces() const noexcept { return interfaces_; }
  double interface(std::size_t k) const { return interfaces_.at(k); }
  double mass() const noexcept { return mass_; }

 private:
  std::vector<double> interfaces_;
  double mass_;
};

/// A block [lo, hi] of constant sign; blocks partition [0, 1].
struct Block {
  double lo;
  double hi;
  int sign;
};

/// N + 1 blocks: [0, x_1], [x_1, x_2], ..., [x_N, 1].
std::vector<Block> blocks(const StepProfile& p);

StepProfile make_equidistributed(int N);
int evaluate(const StepProfile& p, double x);

/// 1 - 2 Σ_k (-1)^k x_k computed from the interfaces.
double mass(const StepProfile& p);
double mass_of_interfaces(const std::vector<double>& interfaces);

StepProfile perturb(const StepProfile& p, const TangentVector& v, double t);
TangentVector tangent_project(const std::vector<double>& w);
double l2_distance(const StepProfile& p, const StepProfile& q);

/// Profile in A_N closest (in the discrete L² sense) to periodic samples on
/// the grid j / M. Crossings of the piecewise-linear interpolant are located
/// at level 0, the N dominant ones are kept, and the interfaces are then
/// refined under the mass constraint (mass = sample mean).
StepProfile nearest_step_profile(const std::vector<double>& samples, int N);

/// L² distance between the piecewise-linear periodic interpolant of the
/// samples and the step profile, computed exactly.
double grid_l2_distance(const std::vector<double>& samples, const StepProfile& p);

}  // namespace lamellar
