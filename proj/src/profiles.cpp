#include "lamellar/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "lamellar/error.hpp"

namespace lamellar {

namespace {

void check_interfaces(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2 || n % 2 != 0) fail(ErrorCode::kDomain, "step profile: N must be even and >= 2");
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(x[k]) || !(x[k] > 0.0 && x[k] < 1.0)) {
      fail(ErrorCode::kOrdering, "step profile: interfaces must lie in (0, 1)");
    }
    if (k > 0 && !(x[k] > x[k - 1])) {
      fail(ErrorCode::kOrdering, "step profile: interfaces must be strictly increasing");
    }
  }
}

}  // namespace

TangentVector::TangentVector(std::vector<double> components)
    : components_(std::move(components)) {
  double alternating = 0.0;
  double scale = 1.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    alternating += (k % 2 == 0 ? -1.0 : 1.0) * components_[k];
    scale = std::max(scale, std::fabs(components_[k]));
  }
  if (std::fabs(alternating) > 1e-12 * scale * static_cast<double>(components_.size())) {
    fail(ErrorCode::kDomain, "tangent vector: alternating sum must vanish");
  }
}

double mass_of_interfaces(const std::vector<double>& x) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); k += 2) acc += x[k + 1] - x[k];
  return 1.0 - 2.0 * acc;
}

StepProfile::StepProfile(std::vector<double> interfaces) : interfaces_(std::move(interfaces)) {
  check_interfaces(interfaces_);
  mass_ = mass_of_interfaces(interfaces_);
}

StepProfile::StepProfile(std::vector<double> interfaces, double mass)
    : interfaces_(std::move(interfaces)), mass_(mass) {
  check_interfaces(interfaces_);
  if (!(mass > -1.0 && mass < 1.0)) fail(ErrorCode::kDomain, "step profile: mass outside (-1, 1)");
  if (std::fabs(mass_of_interfaces(interfaces_) - mass) > kMassTolerance) {
    fail(ErrorCode::kDomain, "step profile: interfaces violate the mass identity");
  }
}

std::vector<Block> blocks(const StepProfile& p) {
  const auto& x = p.interfaces();
  std::vector<Block> out;
  out.reserve(x.size() + 1);
  double lo = 0.0;
  int sign = 1;
  for (double xk : x) {
    out.push_back({lo, xk, sign});
    lo = xk;
    sign = -sign;
  }
  out.push_back({lo, 1.0, sign});
  return out;
}

StepProfile make_equidistributed(int N) {
  if (N < 2 || N % 2 != 0) fail(ErrorCode::kDomain, "make_equidistributed: N must be even and >= 2");
  std::vector<double> x(N);
  for (int k = 1; k <= N; ++k) x[k - 1] = (2.0 * k - 1.0) / (2.0 * N);
  return StepProfile(std::move(x), 0.0);
}

int evaluate(const StepProfile& p, double x) {
  double r = x - std::floor(x);
  const auto& xs = p.interfaces();
  const auto passed = std::upper_bound(xs.begin(), xs.end(), r) - xs.begin();
  return passed % 2 == 0 ? 1 : -1;
}

double mass(const StepProfile& p) { return mass_of_interfaces(p.interfaces()); }

StepProfile perturb(const StepProfile& p, const TangentVector& v, double t) {
  if (v.size() != p.n_interfaces()) {
    fail(ErrorCode::kInvalidArgument, "perturb: dimension mismatch");
  }
  std::vector<double> x = p.interfaces();
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += t * v.components()[k];
  check_interfaces(x);
  return StepProfile(std::move(x), p.mass());
}

TangentVector tangent_project(const std::vector<double>& w) {
  const std::size_t n = w.size();
  double dot = 0.0;
  for (std::size_t k = 0; k < n; ++k) dot += (k % 2 == 0 ? 1.0 : -1.0) * w[k];
  std::vector<double> out(w);
  if (n == 0) return TangentVector(std::move(out));
  const double c = dot / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) out[k] -= (k % 2 == 0 ? 1.0 : -1.0) * c;
  return TangentVector(std::move(out));
}

double l2_distance(const StepProfile& p, const StepProfile& q) {
  std::vector<double> cuts;
  cuts.reserve(p.n_interfaces() + q.n_interfaces() + 2);
  cuts.push_back(0.0);
  cuts.insert(cuts.end(), p.interfaces().begin(), p.interfaces().end());
  cuts.insert(cuts.end(), q.interfaces().begin(), q.interfaces().end());
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (len <= 0.0) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (evaluate(p, mid) != evaluate(q, mid)) acc += 4.0 * len;
  }
  return std::sqrt(acc);
}

namespace {

// Crossings of the periodic linear interpolant at level c, reduced to N by
// repeatedly removing the cyclically adjacent pair with the smallest gap.
// Empty when fewer than N crossings exist or the block at 0 is negative.
std::optional<std::vector<double>> crossings_at(const std::vector<double>& f, double c,
                                                std::size_t N) {
  const std::size_t M = f.size();
  const double h = 1.0 / static_cast<double>(M);
  std::vector<double> xs;
  bool first_up = false;
  for (std::size_t j = 0; j < M; ++j) {
    const double a = f[j] - c;
    const double b = f[(j + 1) % M] - c;
    const bool pa = a >= 0.0;
    const bool pb = b >= 0.0;
    if (pa == pb) continue;
    double t = a / (a - b);
    double x = (static_cast<double>(j) + t) * h;
    if (x >= 1.0) x = std::nextafter(1.0, 0.0);
    if (x <= 0.0) x = std::nextafter(0.0, 1.0);
    if (xs.empty()) first_up = !pa;
    xs.push_back(x);
  }
  if (xs.size() < N) return std::nullopt;
  std::sort(xs.begin(), xs.end());
  // Crossing direction alternates; track whether the block at 0 is positive.
  bool positive_at_zero = !first_up;
  while (xs.size() > N) {
    const std::size_t n = xs.size();
    std::size_t best = 0;
    double best_gap = 2.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = i + 1 < n ? xs[i + 1] - xs[i] : xs[0] + 1.0 - xs[n - 1];
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best + 1 < n) {
      xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(best),
               xs.begin() + static_cast<std::ptrdiff_t>(best) + 2);
    } else {
      xs.pop_back();
      xs.erase(xs.begin());
      positive_at_zero = !positive_at_zero;
    }
  }
  if (!positive_at_zero) return std::nullopt;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) return std::nullopt;
  }
  return xs;
}

}  // namespace

StepProfile nearest_step_profile(const std::vector<double>& samples, int N) {
  if (N < 2 || N % 2 != 0) fail(ErrorCode::kDomain, "nearest_step_profile: N must be even and >= 2");
  if (samples.size() < 2 * static_cast<std::size_t>(N)) {
    fail(ErrorCode::kInvalidArgument, "nearest_step_profile: need at least 2N samples");
  }
  const std::size_t n = static_cast<std::size_t>(N);
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  auto start = crossings_at(samples, 0.0, n);
  if (!start) fail(ErrorCode::kDetection, "nearest_step_profile: fewer than N usable sign changes");

  // Stationarity of the constrained distance puts every interface on one
  // common level c; mass decreases in c, so bisect for the sample mean.
  std::vector<double> best = *start;
  double m0 = mass_of_interfaces(best);
  const double direction = m0 > mean ? 1.0 : -1.0;
  double lo = 0.0;
  double hi = direction * 0.99;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    auto xs = crossings_at(samples, mid, n);
    if (!xs) {
      hi = mid;
      continue;
    }
    const double m = mass_of_interfaces(*xs);
    if ((m - mean) * direction > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (auto xs = crossings_at(samples, lo, n)) {
    auto h = crossings_at(samples, hi, n);
    best = (h && std::fabs(mass_of_interfaces(*h) - mean) < std::fabs(mass_of_interfaces(*xs) - mean))
               ? *h
               : *xs;
  }
  // Close the remaining residual exactly along (−1)^k.
  const double residual = mass_of_interfaces(best) - mean;
  const double alpha = residual / (2.0 * static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) best[k] += (k % 2 == 0 ? -alpha : alpha);
  if (!(mean > -1.0 && mean < 1.0)) fail(ErrorCode::kDetection, "nearest_step_profile: mean outside (-1, 1)");
  try {
    return StepProfile(std::move(best), mean);
  } catch (const Error& e) {
    fail(ErrorCode::kDetection, std::string("nearest_step_profile: ") + e.what());
  }
}

double grid_l2_distance(const std::vector<double>& samples, const StepProfile& p) {
  const std::size_t M = samples.size();
  if (M == 0) fail(ErrorCode::kInvalidArgument, "grid_l2_distance: empty samples");
  const double h = 1.0 / static_cast<double>(M);
  const auto& xs = p.interfaces();
  double acc = 0.0;
  std::size_t next = 0;
  for (std::size_t j = 0; j < M; ++j) {
    const double x0 = static_cast<double>(j) * h;
    const double x1 = static_cast<double>(j + 1) * h;
    const double f0 = samples[j];
    const double f1 = samples[(j + 1) % M];
    auto lin = [&](double x) { return f0 + (f1 - f0) * (x - x0) / h; };
    double a = x0;
    while (true) {
      while (next < xs.size() && xs[next] <= a) ++next;
      const double b = (next < xs.size() && xs[next] < x1) ? xs[next] : x1;
      const double sigma = evaluate(p, 0.5 * (a + b));
      const double da = lin(a) - sigma;
      const double db = lin(b) - sigma;
      acc += (b - a) / 3.0 * (da * da + da * db + db * db);
      if (b >= x1) break;
      a = b;
    }
  }
  return std::sqrt(acc);
}

}  // namespace lamellar
