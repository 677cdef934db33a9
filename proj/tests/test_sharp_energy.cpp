#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "lamellar/error.hpp"
#include "lamellar/potential.hpp"
#include "lamellar/sharp_energy.hpp"
#include "support.hpp"

using namespace lamellar;
using test_support::rel_err;

namespace {

// Square-wave Fourier series: H(U_N) = 4 π^{2s-2} N^{2s} Σ_{j odd} j^{2s-2}.
double h_fourier_oracle(int N, double s) {
  const double p = 2.0 - 2.0 * s;
  const double odd_sum = (1.0 - std::pow(2.0, -p)) * boost::math::zeta(p);
  return 4.0 * std::pow(std::numbers::pi, 2.0 * s - 2.0) * std::pow(N, 2.0 * s) * odd_sum;
}

// H through per-image primitive sums in long double (|n| <= M plus integral tail).
double h_image_oracle(const StepProfile& p, double s, long M) {
  auto phi = [s](long double t) {
    return std::pow(std::fabs(t), 1.0L - 2.0L * s) / (2.0L * s * (1.0L - 2.0L * s));
  };
  long double acc = 0.0L;
  const auto bl = blocks(p);
  for (const auto& I : bl) {
    if (I.sign < 0) continue;
    for (const auto& J : bl) {
      if (J.sign > 0) continue;
      const long double a = I.lo, b = I.hi, c = J.lo, d = J.hi;
      for (long n = -M; n <= M; ++n) {
        acc += phi(b - d - n) + phi(a - c - n) - phi(b - c - n) - phi(a - d - n);
      }
      acc += (b - a) * (d - c) * 2.0L * std::pow(M + 0.5L, -2.0L * s) / (2.0L * s);
    }
  }
  return static_cast<double>(2.0L * acc * normalization_c1s(s));
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double total(const SharpEnergy& e, std::vector<double> x) { return e.energy(StepProfile(std::move(x))).total; }

}  // namespace

TEST_CASE("H of equidistributed profiles against the Fourier oracle") {
  const KernelParams kp(0.25);
  CHECK(rel_err(energy_H(make_equidistributed(2), kp), h_fourier_oracle(2, 0.25)) < 1e-9);
  CHECK(energy_H(make_equidistributed(2), kp) == doctest::Approx(1.7155).epsilon(1e-4));
  CHECK(rel_err(energy_H(make_equidistributed(4), kp) / energy_H(make_equidistributed(2), kp), std::sqrt(2.0)) < 1e-6);
  for (double s : {0.05, 0.1, 0.4, 0.45}) {
    for (int N : {2, 6, 32}) {
      CHECK(rel_err(energy_H(make_equidistributed(N), KernelParams(s)), h_fourier_oracle(N, s)) < 1e-9);
    }
  }
}

TEST_CASE("H of random profiles against the image-sum oracle") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 4; ++t) {
    const double s = t % 2 == 0 ? 0.25 : 0.4;
    auto p = test_support::random_profile(rng, 2 + 2 * t);
    CHECK(rel_err(energy_H(p, KernelParams(s)), h_image_oracle(p, s, 5000)) < 1e-8);
  }
}

TEST_CASE("H invariances") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const SharpEnergy e(ModelParams(0.3, 0.2));
  for (int t = 0; t < 30; ++t) {
    auto p = test_support::random_profile(rng, 2 + 2 * (t % 4));
    const double h = e.h(p);
    CHECK(h > 0.0);
    std::vector<double> r;
    for (auto it = p.interfaces().rbegin(); it != p.interfaces().rend(); ++it) r.push_back(1.0 - *it);
    CHECK(rel_err(e.h(StepProfile(r)), h) < 1e-10);
    std::vector<double> x;
    const double tau = U(rng);
    if (test_support::translated(p, tau, x)) {
      bool ok = x.front() > 1e-6 && x.back() < 1.0 - 1e-6;
      if (ok) CHECK(rel_err(e.h(StepProfile(x)), h) < 1e-10);
    }
  }
}

TEST_CASE("K closed form and scaling") {
  CHECK(energy_K(make_equidistributed(2), GreenParams(1.0)) == doctest::Approx(1.0 / 96.0).epsilon(1e-13));
  CHECK(energy_K(make_equidistributed(4), GreenParams(0.5)) == doctest::Approx(1.0 / 96.0).epsilon(1e-13));
  std::mt19937_64 rng(47);
  for (int t = 0; t < 100; ++t) {
    auto p = test_support::random_profile(rng, 2 + 2 * (t % 5));
    const double g = 0.05 + 0.2 * (t % 7);
    const double k = energy_K(p, GreenParams(g));
    CHECK(k >= 0.0);
    CHECK(rel_err(energy_K(p, GreenParams(2 * g)), k / 4.0) < 1e-12);
    CHECK(rel_err(k, K_from_v(p, GreenParams(g))) < 1e-10);
  }
}

TEST_CASE("energy breakdown") {
  const auto e = energy_total(make_equidistributed(2), ModelParams(0.25, 1.0));
  CHECK(e.w == 0.0);
  CHECK(e.k == doctest::Approx(1.0 / 96.0).epsilon(1e-13));
  CHECK(e.h == doctest::Approx(1.7155).epsilon(1e-4));
  CHECK(e.total == e.h + e.k);
  CHECK_THROWS_AS(ModelParams(0.25, 1.0, 1.0), Error);
  CHECK_THROWS_AS(ModelParams(0.25, 0.0), Error);
  CHECK_THROWS_AS(ModelParams(0.6, 1.0), Error);
  CHECK_THROWS_AS(ModelParams(0.25, 1.0, 0.0, 0.0), Error);
}

TEST_CASE("U_N is a constrained critical point") {
  const ModelParams mp(0.25, 0.05);
  const SharpEnergy e(mp);
  for (int N : {2, 4, 8}) {
    const auto u = make_equidistributed(N);
    CHECK(max_abs(tangent_project(e.gradient(u)).components()) < 1e-8);
    const double lambda = e.lagrange_multiplier(u);
    const auto g = e.gradient(u);
    for (int i = 0; i < N; ++i) {
      const double sgn = i % 2 == 0 ? 1.0 : -1.0;  // (-1)^{i-1}, 1-based
      CHECK(std::fabs(g[i] + 2.0 * sgn * lambda) < 1e-8);
      // λ recovered from the defining integral at x_i.
      CHECK(std::fabs(-g[i] / (2.0 * sgn) - lambda) < 1e-9 * std::max(1.0, std::fabs(lambda)));
    }
  }
  const auto p = perturb(make_equidistributed(4), TangentVector({0.01, 0.0, -0.01, 0.0}), 1.0);
  try {
    e.lagrange_multiplier(p);
    FAIL("expected not-critical error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNotCritical);
  }
}

TEST_CASE("gradient against central differences") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 10; ++t) {
    const int N = t % 2 == 0 ? 4 : 6;
    const ModelParams mp(0.1 + 0.03 * t, 0.1 + 0.1 * t);
    const SharpEnergy e(mp);
    const auto p = test_support::random_profile(rng, N, 0.05);
    const auto g = e.gradient(p);
    const double h = 1e-6;
    std::vector<double> fd(N);
    for (int i = 0; i < N; ++i) {
      auto xp = p.interfaces();
      auto xm = p.interfaces();
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (total(e, xp) - total(e, xm)) / (2 * h);
    }
    double diff = 0.0;
    for (int i = 0; i < N; ++i) diff = std::max(diff, std::fabs(fd[i] - g[i]));
    CHECK(diff / max_abs(g) < 1e-5);
  }
}

TEST_CASE("K part of the gradient equals 2(-1)^{i-1} v(x_i)") {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 20; ++t) {
    const auto p = test_support::random_profile(rng, 2 + 2 * (t % 4));
    const GreenParams gp(0.3);
    const SharpEnergy e(ModelParams(0.25, 0.3));
    const auto parts = e.gradient_parts(p);
    const ExactPotential v(p, gp);
    for (std::size_t i = 0; i < p.n_interfaces(); ++i) {
      const double sgn = i % 2 == 0 ? 1.0 : -1.0;
      CHECK(std::fabs(parts.k[i] - 2.0 * sgn * v.value(p.interface(i))) < 1e-10);
    }
  }
}

TEST_CASE("Hessian structure at U_N") {
  const ModelParams mp(0.25, 0.05);
  const SharpEnergy e(mp);
  for (int N : {4, 8, 16}) {
    const auto H = e.hessian(make_equidistributed(N));
    double scale = 0.0;
    for (double v : H.data()) scale = std::max(scale, std::fabs(v));
    for (int i = 0; i < N; ++i) {
      double row = 0.0;
      for (int j = 0; j < N; ++j) {
        CHECK(std::fabs(H(i, j) - H((i + 1) % N, (j + 1) % N)) < 1e-12 * scale);
        CHECK(H(i, j) == H(j, i));
        row += H(i, j);
      }
      CHECK(std::fabs(row) < 1e-10 * scale);
    }
  }
  const auto H4 = e.hessian(make_equidistributed(4));
  CHECK(rel_err(H4(0, 1), 4.0 * e.kernel_minus_green(0.25)) < 1e-14);
}

TEST_CASE("Hessian against finite differences") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 10; ++t) {
    const int N = t % 2 == 0 ? 4 : 6;
    const SharpEnergy e(ModelParams(0.15 + 0.025 * t, 0.2 + 0.05 * t));
    const auto p = test_support::random_profile(rng, N, 0.05);
    const auto H = e.hessian(p);
    const double h = 1e-5;
    double diff = 0.0;
    double scale = 0.0;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        auto shift = [&](double di, double dj) {
          auto x = p.interfaces();
          x[i] += di;
          x[j] += dj;
          return total(e, x);
        };
        const double fd = (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) / (4 * h * h);
        diff = std::max(diff, std::fabs(fd - H(i, j)));
        scale = std::max(scale, std::fabs(H(i, j)));
      }
    }
    CHECK(diff / scale < 1e-4);
  }
}

TEST_CASE("energy uses the profile's own mass") {
  std::mt19937_64 rng(67);
  const auto p = test_support::random_profile(rng, 4);
  const auto a = energy_total(p, ModelParams(0.25, 0.3, 0.0));
  const auto b = energy_total(p, ModelParams(0.25, 0.3, 0.4));
  CHECK(a.total == b.total);
}
