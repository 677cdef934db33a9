#include "lamellar/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lamellar/error.hpp"

namespace lamellar {

namespace {

constexpr double kPi = std::numbers::pi;

void check_even(int N, const char* who) {
  if (N < 2 || N % 2 != 0) fail(ErrorCode::kDomain, std::string(who) + ": N must be even and >= 2");
}

void check_mode(int N, int l, const char* who) {
  if (l < 1 || l > N - 1) fail(ErrorCode::kDomain, std::string(who) + ": l must lie in 1..N-1");
}

double sin2(int k, int l, int N) {
  const double r = std::sin(kPi * static_cast<double>((static_cast<long long>(k) * l) % N) / N);
  return r * r;
}

double alt(int k) { return k % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::kLocalMin: return "LocalMin";
    case Stability::kSaddle: return "Saddle";
    case Stability::kMarginal: return "Marginal";
  }
  return "unknown";
}

CirculantRow::CirculantRow(int n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
  if (n < 1 || entries_.size() != static_cast<std::size_t>(n)) {
    fail(ErrorCode::kInvalidArgument, "CirculantRow: entry count must equal n");
  }
  double scale = 0.0;
  for (double a : entries_) scale = std::max(scale, std::fabs(a));
  for (int k = 1; k < n; ++k) {
    if (std::fabs(entries_[k] - entries_[n - k]) > 1e-12 * scale) {
      fail(ErrorCode::kDomain, "CirculantRow: row is not symmetric");
    }
  }
}

CirculantRow circulant_row_at_UN(int N, const SharpEnergy& energy) {
  check_even(N, "circulant_row_at_UN");
  if (energy.params().m() != 0.0) fail(ErrorCode::kDomain, "circulant_row_at_UN: requires m = 0");
  std::vector<double> a(N, 0.0);
  for (int k = 1; k <= N / 2; ++k) {
    a[k] = 4.0 * alt(k - 1) * energy.kernel_minus_green(static_cast<double>(k) / N);
    a[N - k] = a[k];
  }
  double a0 = 0.0;
  for (int k = 1; k < N; ++k) a0 -= a[k];
  a[0] = a0;
  return CirculantRow(N, std::move(a));
}

CirculantRow circulant_row_at_UN(int N, const ModelParams& mp) {
  return circulant_row_at_UN(N, SharpEnergy(mp));
}

std::vector<double> circulant_eigenvalues(const CirculantRow& row) {
  const int N = row.n();
  const auto& a = row.entries();
  std::vector<double> lambda(N);
  for (int l = 0; l <= N / 2; ++l) {
    double acc = a[0];
    for (int k = 1; k < N; ++k) {
      const long long r = (static_cast<long long>(k) * l) % N;
      acc += a[k] * std::cos(2.0 * kPi * static_cast<double>(r) / N);
    }
    lambda[l] = acc;
  }
  for (int l = N / 2 + 1; l < N; ++l) lambda[l] = lambda[N - l];
  return lambda;
}

double green_part_closed_form(int N, int l, const GreenParams& gp) {
  check_even(N, "green_part_closed_form");
  check_mode(N, l, "green_part_closed_form");
  const double g2 = gp.gamma() * gp.gamma();
  if (2 * l == N) return -4.0 / (3.0 * g2 * N);
  const double t = std::tan(kPi * l / N);
  return t * t / (g2 * N);
}

double green_trig_sum(int N, int l, const GreenParams& gp) {
  check_even(N, "green_trig_sum");
  check_mode(N, l, "green_trig_sum");
  double acc = 0.0;
  for (int k = 1; k < N; ++k) {
    acc += alt(k - 1) * green_value(static_cast<double>(k) / N, gp) * sin2(k, l, N);
  }
  return 16.0 * acc;
}

double green_part(int N, int l, const GreenParams& gp) {
  check_even(N, "green_part");
  check_mode(N, l, "green_part");
  const double g2 = gp.gamma() * gp.gamma();
  if (2 * l == N) return -2.0 / (3.0 * g2 * N);
  const double t = std::tan(kPi * l / N);
  return t * t / (g2 * N);
}

double kernel_part(int N, int l, const PeriodicKernel& kernel) {
  check_even(N, "kernel_part");
  check_mode(N, l, "kernel_part");
  double acc = 0.0;
  for (int k = 1; k < N; ++k) {
    const int kk = std::min(k, N - k);
    acc += alt(k) * kernel.value(static_cast<double>(kk) / N) * sin2(k, l, N);
  }
  return 8.0 * acc;
}

double kernel_part(int N, int l, const KernelParams& kp) {
  return kernel_part(N, l, PeriodicKernel(kp));
}

std::optional<double> gamma0(int N, double s) {
  check_even(N, "gamma0");
  if (!(s > 0.0 && s < 0.5)) fail(ErrorCode::kDomain, "gamma0: s must lie in (0, 1/2)");
  if (N == 2) return std::nullopt;
  return std::tan(kPi / N) / (100.0 * std::sqrt(s) * std::pow(static_cast<double>(N), 1.0 + s));
}

SpectrumReport classify(int N, const ModelParams& mp) {
  check_even(N, "classify");
  if (mp.m() != 0.0) fail(ErrorCode::kDomain, "classify: requires m = 0");
  SpectrumReport rep;
  rep.n = N;
  rep.eigenvalues = circulant_eigenvalues(circulant_row_at_UN(N, mp));
  rep.gamma0 = gamma0(N, mp.s());
  double scale = 0.0;
  for (double l : rep.eigenvalues) scale = std::max(scale, std::fabs(l));
  rep.tolerance = 1e-9 * scale;
  for (int l = 1; l < N; ++l) {
    if (2 * l == N) continue;
    const double v = rep.eigenvalues[l];
    if (!rep.min_constrained || v < *rep.min_constrained) rep.min_constrained = v;
  }
  if (!rep.min_constrained || *rep.min_constrained > rep.tolerance) {
    rep.classification = Stability::kLocalMin;
  } else if (*rep.min_constrained < -rep.tolerance) {
    rep.classification = Stability::kSaddle;
  } else {
    rep.classification = Stability::kMarginal;
  }
  return rep;
}

CriticalGammaResult critical_gamma(int N, double s, int tail_terms) {
  check_even(N, "critical_gamma");
  if (N < 4) fail(ErrorCode::kDomain, "critical_gamma: requires N >= 4");
  const PeriodicKernel kernel(KernelParams(s, tail_terms));
  const GreenParams unit(1.0);
  std::vector<double> kp;
  std::vector<double> g1;
  for (int l = 1; l < N; ++l) {
    if (2 * l == N) continue;
    kp.push_back(kernel_part(N, l, kernel));
    g1.push_back(green_part(N, l, unit));
  }
  auto f = [&](double gamma) {
    double m = kp[0] + g1[0] / (gamma * gamma);
    for (std::size_t i = 1; i < kp.size(); ++i) m = std::min(m, kp[i] + g1[i] / (gamma * gamma));
    return m;
  };
  constexpr double lo_g = 1e-6;
  constexpr double hi_g = 1e3;
  constexpr int scan = 900;
  const double step = std::log(hi_g / lo_g) / scan;
  CriticalGammaResult res;
  double prev_g = lo_g;
  double prev_f = f(lo_g);
  bool found = false;
  double bl = 0.0;
  double bh = 0.0;
  for (int i = 1; i <= scan; ++i) {
    const double g = lo_g * std::exp(step * i);
    const double v = f(g);
    if ((prev_f > 0.0) != (v > 0.0)) {
      ++res.sign_changes;
      if (!found) {
        found = true;
        bl = prev_g;
        bh = g;
      }
    }
    prev_g = g;
    prev_f = v;
  }
  if (!found) fail(ErrorCode::kNoBracket, "critical_gamma: no sign change of min eigenvalue in [1e-6, 1e3]");
  res.monotone = res.sign_changes == 1;
  const bool lo_positive = f(bl) > 0.0;
  while (bh - bl > 1e-10 * bl) {
    const double mid = std::sqrt(bl * bh);
    if ((f(mid) > 0.0) == lo_positive) {
      bl = mid;
    } else {
      bh = mid;
    }
  }
  res.gamma = 0.5 * (bl + bh);
  return res;
}

}  // namespace lamellar
