#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <bit>
#include <filesystem>
#include <functional>
#include <fstream>
#include <numbers>
#include <random>

#include "lamellar/error.hpp"
#include "lamellar/phase_field.hpp"
#include "support.hpp"

using namespace lamellar;
using test_support::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_smooth(std::mt19937_64& rng, std::size_t M, double amplitude, int modes = 8) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> a(modes), b(modes);
  for (int k = 0; k < modes; ++k) {
    a[k] = U(rng) / (k + 1);
    b[k] = U(rng) / (k + 1);
  }
  std::vector<double> v(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double x = static_cast<double>(j) / M;
    double acc = 0.0;
    for (int k = 0; k < modes; ++k) acc += a[k] * std::cos(2 * kPi * (k + 1) * x) + b[k] * std::sin(2 * kPi * (k + 1) * x);
    v[j] = amplitude * acc;
  }
  return v;
}

// Naive DFT application of a real even multiplier σ(|freq|), for small M.
std::vector<double> apply_symbol(const std::vector<double>& u, const std::function<double(double)>& sigma) {
  const std::size_t M = u.size();
  std::vector<double> out(M, 0.0);
  for (std::size_t j = 1; j < M; ++j) {
    const double f = j <= M / 2 ? static_cast<double>(j) : static_cast<double>(j) - M;
    std::complex<double> c = 0.0;
    for (std::size_t n = 0; n < M; ++n) c += u[n] * std::polar(1.0, -2 * kPi * f * n / M);
    c /= static_cast<double>(M);
    for (std::size_t n = 0; n < M; ++n) out[n] += (sigma(std::fabs(f)) * c * std::polar(1.0, 2 * kPi * f * n / M)).real();
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

}  // namespace

TEST_CASE("spectral symbols") {
  const auto sy = spectral_symbols(16, ModelParams(0.25, 1.0));
  CHECK(sy.h[0] == 0.0);
  CHECK(sy.k[0] == 0.0);
  CHECK(sy.h[1] == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-15));
  CHECK(sy.h[1] == doctest::Approx(2.5066).epsilon(1e-4));
  CHECK(sy.k[1] == doctest::Approx(1.0 / (4 * kPi * kPi)).epsilon(1e-15));
  CHECK(sy.k[1] == doctest::Approx(0.025330).epsilon(1e-4));
  for (std::size_t j = 1; j < 16; ++j) {
    CHECK(sy.h[j] == sy.h[16 - j]);
    CHECK(sy.k[j] == sy.k[16 - j]);
  }
  CHECK(rel_err(spectral_symbols(16, ModelParams(0.25, 0.5)).k[3], 1.0 / std::pow(2 * kPi * 0.5 * 3, 2)) < 1e-15);
  CHECK_THROWS_AS(spectral_symbols(12, ModelParams(0.25, 1.0)), Error);
}

TEST_CASE("double well") {
  CHECK(double_well(0.0) == 0.25);
  CHECK(double_well(1.0) == 0.0);
  CHECK(double_well(-1.0) == 0.0);
  CHECK(double_well_derivative(0.5) == doctest::Approx(-0.375));
}

TEST_CASE("grid state invariants") {
  const ModelParams mp(0.25, 1.0);
  CHECK_THROWS_AS(GridState(std::vector<double>(12, 0.0), mp), Error);
  CHECK_THROWS_AS(GridState(std::vector<double>(2, 0.0), mp), Error);
  CHECK_THROWS_AS(GridState(std::vector<double>(8, 0.1), mp), Error);
  CHECK_THROWS_AS(GridState({0, 0, 0, std::nan("")}, mp), Error);
  const auto g = GridState::from_samples({1.0, 2.0, 3.0, 4.0}, mp);
  CHECK(std::fabs(g.mean()) < 1e-15);
  const auto st = GridState::from_step_profile(make_equidistributed(2), 8, mp);
  CHECK(st.values() == std::vector<double>{1, 1, -1, -1, -1, -1, 1, 1});
}

TEST_CASE("diffuse energy of simple states") {
  const ModelParams mp(0.25, 1.0, 0.0, 0.01);
  const auto e0 = energy_eps(GridState(std::vector<double>(64, 0.0), mp));
  CHECK(e0.h == 0.0);
  CHECK(e0.k == 0.0);
  CHECK(rel_err(e0.w, std::pow(0.01, -0.5) / 4.0) < 1e-15);

  const ModelParams mp1(0.25, 1.0);
  const auto st = GridState::from_step_profile(make_equidistributed(2), 1 << 14, mp1);
  const auto e = energy_eps(st);
  CHECK(e.w == 0.0);
  CHECK(rel_err(e.h, energy_H(make_equidistributed(2), mp1.kernel_params())) < 1e-2);
  CHECK(rel_err(e.k, 1.0 / 96.0) < 1e-3);
  for (double eps : {0.1, 0.01, 1e-4}) CHECK(energy_eps(st.with_params(mp1.with_epsilon(eps))).w == 0.0);
}

TEST_CASE("spectral energies of single modes") {
  for (int k : {1, 3, 7}) {
    const double s = 0.3, g = 0.2, amp = 0.7;
    const ModelParams mp(s, g);
    std::vector<double> v(128);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = amp * std::sin(2 * kPi * k * j / 128.0);
    const auto e = energy_eps(GridState::from_samples(v, mp), false);
    CHECK(rel_err(e.h, 0.5 * std::pow(2 * kPi * k, 2 * s) * amp * amp / 2) < 1e-10);
    CHECK(rel_err(e.k, 0.5 * std::pow(2 * kPi * g * k, -2) * amp * amp / 2) < 1e-10);
    CHECK(e.w == 0.0);
  }
  // Nyquist mode.
  std::vector<double> v(16);
  for (std::size_t j = 0; j < 16; ++j) v[j] = j % 2 == 0 ? 0.5 : -0.5;
  const auto e = energy_eps(GridState(v, ModelParams(0.25, 1.0)), false);
  CHECK(rel_err(e.h, 0.5 * std::pow(2 * kPi * 8, 0.5) * 0.25) < 1e-12);
}

TEST_CASE("discrete K of sampled steps converges at least like 1/M") {
  for (int N : {2, 4}) {
    const double g = 0.3;
    const double exact = 1.0 / (24 * g * g * N * N);
    auto err = [&](std::size_t M) {
      return std::fabs(energy_eps(GridState::from_step_profile(make_equidistributed(N), M, ModelParams(0.25, g))).k - exact);
    };
    const double e1 = err(1 << 10), e2 = err(1 << 12);
    CHECK(e2 < e1 / 3.5);
    CHECK(e2 < 1e-3 * exact);
  }
}

TEST_CASE("linear regime decays each mode exactly") {
  const ModelParams mp(0.25, 0.1, 0.0, 0.05);
  PhaseFieldSolver solver(64, mp);
  for (int k : {1, 5, 32}) {
    std::vector<double> v(64);
    for (std::size_t j = 0; j < 64; ++j) v[j] = 0.3 * std::cos(2 * kPi * k * j / 64.0);
    const double dt = 0.05;
    const auto out = solver.trial(v, dt, 0.0, false);
    const double sh = std::pow(2 * kPi * k, 0.5), sk = std::pow(2 * kPi * 0.1 * k, -2);
    const double factor = 1.0 / (1.0 + dt * (sh + sk));
    for (std::size_t j = 0; j < 64; ++j) CHECK(std::fabs(out[j] - factor * v[j]) < 1e-15);
  }
}

TEST_CASE("semi-implicit step agrees with explicit Euler to second order") {
  std::mt19937_64 rng(101);
  const ModelParams mp(0.3, 0.4, 0.0, 0.5);
  const double weps = std::pow(0.5, -0.6);
  PhaseFieldSolver solver(64, mp);
  for (int t = 0; t < 3; ++t) {
    auto u = GridState::from_samples(random_smooth(rng, 64, 0.3), mp).values();
    const auto lh = apply_symbol(u, [&](double f) { return std::pow(2 * kPi * f, 0.6); });
    const auto lk = apply_symbol(u, [&](double f) { return std::pow(2 * kPi * 0.4 * f, -2.0); });
    std::vector<double> wp(64);
    for (std::size_t j = 0; j < 64; ++j) wp[j] = weps * double_well_derivative(u[j]);
    const double wm = mean(wp);
    auto diff = [&](double dt) {
      const auto si = solver.trial(u, dt, 2 * weps, true);
      double m = 0.0;
      for (std::size_t j = 0; j < 64; ++j) {
        const double ee = u[j] - dt * (lh[j] + lk[j] + wp[j] - wm);
        m = std::max(m, std::fabs(si[j] - ee));
      }
      return m;
    };
    const double d1 = diff(1e-3), d2 = diff(5e-4);
    CHECK(d1 < 1e-4);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("flow steps conserve mass and decrease energy") {
  std::mt19937_64 rng(103);
  const ModelParams mp(0.25, 0.3, 0.2, 0.05);
  PhaseFieldSolver solver(256, mp);
  FlowConfig cfg;
  auto state = GridState::from_samples(random_smooth(rng, 256, 0.4), mp);
  double e = solver.energy(state.values()).total;
  double dt = cfg.dt;
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const double before = state.mean();
    auto out = solver.step(state, cfg, dt);
    worst = std::max(worst, std::fabs(out.state.mean() - before));
    CHECK(out.energy.total <= e + kEnergySlack * std::max(1.0, std::fabs(e)));
    CHECK(out.state.max_abs() <= 1.0 + cfg.overshoot_budget);
    e = out.energy.total;
    state = out.state;
    dt = std::min(cfg.dt, 2 * out.dt);
  }
  CHECK(worst < 1e-13);
  CHECK(std::fabs(state.mean() - 0.2) < 1e-12);
}

TEST_CASE("mass drift over many steps") {
  std::mt19937_64 rng(107);
  const ModelParams mp(0.25, 0.5, -0.1, 0.1);
  PhaseFieldSolver solver(64, mp);
  FlowConfig cfg;
  cfg.dt = 0.01;
  auto state = GridState::from_samples(random_smooth(rng, 64, 0.5), mp);
  const double m0 = state.mean();
  for (int n = 0; n < 100000; ++n) state = solver.step(state, cfg, cfg.dt).state;
  CHECK(std::fabs(state.mean() - m0) < 1e-10);
}

TEST_CASE("uniform state is stationary") {
  const ModelParams mp(0.25, 0.2, 0.3, 0.05);
  const auto r = run_flow(GridState(std::vector<double>(128, 0.3), mp), FlowConfig{});
  CHECK(r.converged);
  for (double v : r.state.values()) CHECK(std::fabs(v - 0.3) < 1e-14);
  for (const auto& row : r.trace) CHECK(row.energy.total == r.trace.front().energy.total);
}

TEST_CASE("relaxation from a perturbed four-lamella state") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> U(-1e-3, 1e-3);
  const ModelParams mp(0.25, 0.05, 0.0, 1e-3);
  auto v = GridState::from_step_profile(make_equidistributed(4), 1 << 12, mp).values();
  for (double& x : v) x += U(rng);
  const auto r = run_flow(GridState::from_samples(v, mp), FlowConfig{});
  CHECK(r.converged);
  CHECK(energy_trace_monotone(r.trace));
  CHECK(r.max_mean_drift < 1e-13);
  const auto p = nearest_step_profile(r.state.values(), 4);
  const auto u = make_equidistributed(4);
  for (int i = 0; i < 4; ++i) CHECK(std::fabs(p.interface(i) - u.interface(i)) < 1e-2);
}

TEST_CASE("gamma-limit experiment") {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> U(-1e-3, 1e-3);
  const ModelParams mp(0.25, 1.0, 0.0, 0.1);
  auto v = GridState::from_step_profile(make_equidistributed(2), 1 << 12, mp).values();
  for (double& x : v) x += U(rng);
  GridState last(std::vector<double>(4, 0.0), mp);
  const auto recs = gamma_limit_experiment({0.1, 0.05, 0.025}, GridState::from_samples(v, mp), FlowConfig{}, 2, &last);
  REQUIRE(recs.size() == 3);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    REQUIRE(recs[i].nearest.has_value());
    CHECK(recs[i].converged);
    CHECK(recs[i].energy_monotone);
    CHECK(recs[i].max_mean_drift < 1e-10);
    CHECK(recs[i].energy_gap == doctest::Approx(recs[i].energy.total - recs[i].sharp_energy));
    if (i > 0) {
      CHECK(recs[i].distance < recs[i - 1].distance);
      CHECK(std::fabs(recs[i].energy_gap) < std::fabs(recs[i - 1].energy_gap));
    }
  }
  CHECK(last.points() == (1u << 12));
  CHECK(last.params().epsilon() == 0.025);
  CHECK(energy_eps(last).total == recs.back().energy.total);
  CHECK_THROWS_AS(gamma_limit_experiment({0.1, 0.1}, GridState::from_samples(v, mp), FlowConfig{}, 2), Error);
  CHECK_THROWS_AS(gamma_limit_experiment({}, GridState::from_samples(v, mp), FlowConfig{}, 2), Error);
}

TEST_CASE("relaxed states without N sign changes have no nearest profile") {
  // At γ = 0.05 and ε = 0.1 the uniform state has lower energy than any lamellar state.
  const ModelParams mp(0.25, 0.05, 0.0, 0.1);
  const auto base = GridState::from_step_profile(make_equidistributed(2), 1 << 10, mp);
  const auto recs = gamma_limit_experiment({0.1}, base, FlowConfig{}, 2);
  CHECK_FALSE(recs[0].nearest.has_value());
  CHECK(std::isnan(recs[0].distance));
  CHECK(recs[0].energy.total == doctest::Approx(std::pow(0.1, -0.5) / 4.0).epsilon(1e-9));
}

TEST_CASE("step failure") {
  std::mt19937_64 rng(127);
  const ModelParams mp(0.25, 0.2, 0.0, 1e-3);
  const auto state = GridState::from_samples(random_smooth(rng, 64, 0.9, 30), mp);
  FlowConfig cfg;
  cfg.stabilization = 0.0;
  cfg.max_halvings = 0;
  cfg.overshoot_budget = 0.0;
  try {
    PhaseFieldSolver(64, mp).step(state, cfg, 10.0);
    FAIL("expected step failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStepFailure);
  }
  FlowConfig bad;
  bad.dt = -1.0;
  CHECK_THROWS_AS(flow_step(state, bad), Error);
}

TEST_CASE("checkpoint round trip") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "lamellar_ckpt_test";
  fs::create_directories(dir);
  const std::string a = (dir / "a.llpf").string(), b = (dir / "b.llpf").string();
  std::vector<double> v{0.5, -1.25, 1e-300, -0.0, 3.0, 7.0, 1.0 / 3.0, -2.5};
  save_checkpoint(a, v);
  CHECK(fs::file_size(a) == 12 + 8 * v.size());
  const auto back = load_checkpoint(a);
  REQUIRE(back.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::bit_cast<std::uint64_t>(back[i]) == std::bit_cast<std::uint64_t>(v[i]));
  save_checkpoint(b, back);
  auto slurp = [](const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
  };
  const std::string bytes = slurp(a);
  CHECK(bytes == slurp(b));
  CHECK(bytes.substr(0, 4) == "LLPF");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 8);
  {
    std::ofstream os(b, std::ios::binary | std::ios::app);
    os.put('x');
  }
  CHECK_THROWS_AS(load_checkpoint(b), Error);
  {
    std::ofstream os(b, std::ios::binary | std::ios::trunc);
    os << "LLPX" << bytes.substr(4);
  }
  CHECK_THROWS_AS(load_checkpoint(b), Error);
  CHECK_THROWS_AS(load_checkpoint((dir / "missing.llpf").string()), Error);
  fs::remove_all(dir);
}
