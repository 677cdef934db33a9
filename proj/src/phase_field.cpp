#include "lamellar/phase_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

#include "fft.hpp"
#include "lamellar/error.hpp"

namespace lamellar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint32_t kCheckpointVersion = 1;

void check_points(std::size_t M) {
  if (M < 4 || !std::has_single_bit(M)) {
    fail(ErrorCode::kDomain, "grid: M must be a power of two >= 4");
  }
}

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double kappa_for(const FlowConfig& cfg, const ModelParams& mp) {
  if (cfg.stabilization) return *cfg.stabilization;
  return 2.0 * std::pow(mp.epsilon(), -2.0 * mp.s());
}

void check_config(const FlowConfig& cfg) {
  if (!(cfg.dt > 0.0)) fail(ErrorCode::kDomain, "flow: dt must be positive");
  if (cfg.stabilization && !(*cfg.stabilization >= 0.0)) {
    fail(ErrorCode::kDomain, "flow: stabilization must be non-negative");
  }
  if (cfg.max_steps < 1) fail(ErrorCode::kDomain, "flow: max_steps must be >= 1");
  if (!(cfg.energy_tolerance > 0.0)) fail(ErrorCode::kDomain, "flow: energy_tolerance must be positive");
}

}  // namespace

GridState::GridState(std::vector<double> values, const ModelParams& params)
    : values_(std::move(values)), params_(params) {
  check_points(values_.size());
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorCode::kDomain, "grid: non-finite sample");
  }
  if (std::fabs(mean_of(values_) - params_.m()) > kMeanTolerance) {
    fail(ErrorCode::kDomain, "grid: sample mean differs from m");
  }
}

GridState GridState::from_samples(std::vector<double> values, const ModelParams& params) {
  check_points(values.size());
  const double shift = params.m() - mean_of(values);
  for (double& v : values) v += shift;
  return GridState(std::move(values), params);
}

GridState GridState::from_step_profile(const StepProfile& p, std::size_t M, const ModelParams& params) {
  check_points(M);
  std::vector<double> v(M);
  for (std::size_t j = 0; j < M; ++j) v[j] = evaluate(p, static_cast<double>(j) / static_cast<double>(M));
  return GridState(std::move(v), params);
}

double GridState::mean() const { return mean_of(values_); }

double GridState::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

GridState GridState::with_params(const ModelParams& params) const { return GridState(values_, params); }

SpectralSymbols spectral_symbols(std::size_t M, const ModelParams& mp) {
  check_points(M);
  SpectralSymbols out;
  out.h.assign(M, 0.0);
  out.k.assign(M, 0.0);
  for (std::size_t j = 1; j < M; ++j) {
    const double freq = j <= M / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(M);
    const double w = kTwoPi * std::fabs(freq);
    out.h[j] = std::pow(w, 2.0 * mp.s());
    const double g = mp.gamma() * w;
    out.k[j] = 1.0 / (g * g);
  }
  return out;
}

double double_well(double u) {
  const double a = 1.0 - u * u;
  return 0.25 * a * a;
}

double double_well_derivative(double u) { return u * u * u - u; }

PhaseFieldSolver::PhaseFieldSolver(std::size_t M, const ModelParams& params)
    : M_(M), params_(params), symbols_(spectral_symbols(M, params)),
      fft_(std::make_unique<detail::RealFft>(M)) {}

PhaseFieldSolver::~PhaseFieldSolver() = default;

EnergyBreakdown PhaseFieldSolver::energy(const std::vector<double>& u, bool include_potential) {
  fft_->forward(u, spec_);
  double h = 0.0;
  double k = 0.0;
  for (std::size_t j = M_ / 2; j >= 1; --j) {
    const double weight = j == M_ / 2 ? 1.0 : 2.0;
    const double a2 = std::norm(spec_[j]);
    h += weight * symbols_.h[j] * a2;
    k += weight * symbols_.k[j] * a2;
  }
  EnergyBreakdown e;
  e.h = 0.5 * h;
  e.k = 0.5 * k;
  if (include_potential) {
    double w = 0.0;
    for (double v : u) w += double_well(v);
    e.w = std::pow(params_.epsilon(), -2.0 * params_.s()) * w / static_cast<double>(M_);
  }
  e.total = e.h + e.w + e.k;
  return e;
}

std::vector<double> PhaseFieldSolver::trial(const std::vector<double>& u, double dt, double kappa,
                                            bool include_potential) {
  const double weps = std::pow(params_.epsilon(), -2.0 * params_.s());
  fft_->forward(u, spec_);
  if (include_potential) {
    work_.resize(M_);
    for (std::size_t j = 0; j < M_; ++j) work_[j] = double_well_derivative(u[j]);
    fft_->forward(work_, spec_nl_);
  } else {
    spec_nl_.assign(M_ / 2 + 1, {0.0, 0.0});
  }
  for (std::size_t j = 1; j <= M_ / 2; ++j) {
    const double denom = 1.0 + dt * (symbols_.h[j] + symbols_.k[j] + kappa);
    spec_[j] = (spec_[j] * (1.0 + dt * kappa) - dt * weps * spec_nl_[j]) / denom;
  }
  spec_[M_ / 2].imag(0.0);
  std::vector<double> out;
  fft_->inverse(spec_, out);
  // The inverse carries the factor M back; mode 0 is left untouched.
  return out;
}

StepOutcome PhaseFieldSolver::step(const GridState& state, const FlowConfig& cfg, double dt) {
  check_config(cfg);
  const double kappa = kappa_for(cfg, params_);
  const auto e0 = energy(state.values(), cfg.include_potential);
  const double slack = kEnergySlack * std::max(1.0, std::fabs(e0.total));
  const double target = params_.m();
  for (int h = 0; h <= cfg.max_halvings; ++h, dt *= 0.5) {
    std::vector<double> u = trial(state.values(), dt, kappa, cfg.include_potential);
    // Remove rounding drift of the frozen mean.
    const double drift = target - mean_of(u);
    double max_abs = 0.0;
    bool finite = true;
    for (double& v : u) {
      v += drift;
      finite = finite && std::isfinite(v);
      max_abs = std::max(max_abs, std::fabs(v));
    }
    if (!finite || max_abs > 1.0 + cfg.overshoot_budget) continue;
    const auto e1 = energy(u, cfg.include_potential);
    if (e1.total > e0.total + slack) continue;
    return {GridState(std::move(u), params_), dt, h, e1};
  }
  fail(ErrorCode::kStepFailure, "flow_step: energy still increases after the maximum number of halvings");
}

FlowResult PhaseFieldSolver::run(const GridState& state, const FlowConfig& cfg) {
  check_config(cfg);
  FlowResult res{state, {}, false, 0, 0, 0.0, state.max_abs()};
  const double m0 = state.mean();
  auto e = energy(state.values(), cfg.include_potential);
  res.trace.push_back({0, 0.0, e});
  double dt = cfg.dt;
  int quiet = 0;
  for (int n = 1; n <= cfg.max_steps; ++n) {
    StepOutcome out = step(res.state, cfg, dt);
    res.rejected += out.halvings;
    const double de = std::fabs(out.energy.total - e.total);
    e = out.energy;
    res.state = std::move(out.state);
    res.steps = n;
    res.trace.push_back({n, out.dt, e});
    res.max_mean_drift = std::max(res.max_mean_drift, std::fabs(res.state.mean() - m0));
    res.max_abs = std::max(res.max_abs, res.state.max_abs());
    dt = std::min(cfg.dt, 2.0 * out.dt);
    quiet = de < cfg.energy_tolerance ? quiet + 1 : 0;
    if (quiet >= cfg.stall_window) {
      res.converged = true;
      break;
    }
  }
  return res;
}

bool energy_trace_monotone(const std::vector<TraceRow>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double prev = trace[i - 1].energy.total;
    if (trace[i].energy.total > prev + kEnergySlack * std::max(1.0, std::fabs(prev))) return false;
  }
  return true;
}

EnergyBreakdown energy_eps(const GridState& state, bool include_potential) {
  PhaseFieldSolver solver(state.points(), state.params());
  return solver.energy(state.values(), include_potential);
}

GridState flow_step(const GridState& state, const FlowConfig& cfg) {
  PhaseFieldSolver solver(state.points(), state.params());
  return solver.step(state, cfg, cfg.dt).state;
}

FlowResult run_flow(const GridState& state, const FlowConfig& cfg) {
  PhaseFieldSolver solver(state.points(), state.params());
  return solver.run(state, cfg);
}

std::vector<GammaLimitRecord> gamma_limit_experiment(const std::vector<double>& eps_schedule,
                                                     const GridState& base, const FlowConfig& cfg,
                                                     int target_N, GridState* final_state) {
  if (eps_schedule.empty()) fail(ErrorCode::kDomain, "gamma_limit_experiment: empty schedule");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0) || (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))) {
      fail(ErrorCode::kDomain, "gamma_limit_experiment: schedule must be positive and strictly decreasing");
    }
  }
  const SharpEnergy sharp(base.params());
  std::vector<GammaLimitRecord> records;
  GridState state = base;
  for (double eps : eps_schedule) {
    const ModelParams mp = base.params().with_epsilon(eps);
    state = state.with_params(mp);
    PhaseFieldSolver solver(state.points(), mp);
    FlowResult res = solver.run(state, cfg);
    state = res.state;
    const bool monotone = energy_trace_monotone(res.trace);
    const EnergyBreakdown e = res.trace.back().energy;
    std::optional<StepProfile> nearest;
    double distance = std::numeric_limits<double>::quiet_NaN();
    double e_sharp = distance;
    try {
      nearest = nearest_step_profile(state.values(), target_N);
      distance = grid_l2_distance(state.values(), *nearest);
      e_sharp = sharp.energy(*nearest).total;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kDetection) throw;
    }
    records.push_back({eps, e, nearest, distance, e_sharp, e.total - e_sharp, res.steps,
                       res.converged, monotone, res.max_mean_drift, std::move(res.trace)});
  }
  if (final_state) *final_state = state;
  return records;
}

namespace {

void put_u32(std::ofstream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<double>& values) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::kIo, "checkpoint: cannot open " + path + " for writing");
  os.write("LLPF", 4);
  put_u32(os, kCheckpointVersion);
  put_u32(os, static_cast<std::uint32_t>(values.size()));
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
    os.write(reinterpret_cast<const char*>(b), 8);
  }
  if (!os) fail(ErrorCode::kIo, "checkpoint: write failed for " + path);
}

std::vector<double> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::kIo, "checkpoint: cannot open " + path);
  unsigned char header[12];
  if (!is.read(reinterpret_cast<char*>(header), 12) || std::memcmp(header, "LLPF", 4) != 0) {
    fail(ErrorCode::kIo, "checkpoint: bad header in " + path);
  }
  if (get_u32(header + 4) != kCheckpointVersion) fail(ErrorCode::kIo, "checkpoint: unsupported version");
  const std::uint32_t M = get_u32(header + 8);
  std::vector<double> values(M);
  for (std::uint32_t j = 0; j < M; ++j) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) fail(ErrorCode::kIo, "checkpoint: truncated " + path);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    values[j] = std::bit_cast<double>(bits);
  }
  if (is.peek() != std::char_traits<char>::eof()) fail(ErrorCode::kIo, "checkpoint: trailing bytes in " + path);
  return values;
}

}  // namespace lamellar
