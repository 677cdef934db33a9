#include "lamellar/lamellar.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "lamellar/descent.hpp"
#include "lamellar/error.hpp"
#include "lamellar/io.hpp"
#include "lamellar/kernels.hpp"
#include "lamellar/phase_field.hpp"
#include "lamellar/potential.hpp"
#include "lamellar/profiles.hpp"
#include "lamellar/sharp_energy.hpp"
#include "lamellar/spectrum.hpp"

struct lam_profile {
  lamellar::StepProfile value;
};

struct lam_model {
  lamellar::SharpEnergy energy;
};

struct lam_spectrum {
  lamellar::SpectrumReport report;
  std::vector<double> row;
  std::vector<double> kernel_parts;  // index l - 1
  std::vector<double> green_parts;
};

struct lam_descent_result {
  lamellar::DescentResult value;
};

struct lam_grid {
  lamellar::GridState value;
};

struct lam_flow_result {
  lamellar::FlowResult value;
};

struct lam_gamma_records {
  std::vector<lamellar::GammaLimitRecord> records;
  lamellar::GridState state;
};

namespace {

thread_local std::string g_last_error;

lam_status to_status(lamellar::ErrorCode code) { return static_cast<lam_status>(static_cast<int>(code)); }

template <class F>
lam_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return LAM_OK;
  } catch (const lamellar::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LAM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LAM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return LAM_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) lamellar::fail(lamellar::ErrorCode::kInvalidArgument, what);
}

lam_energy to_c(const lamellar::EnergyBreakdown& e) { return {e.h, e.w, e.k, e.total}; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

lamellar::FlowConfig to_cpp(const lam_flow_config& c) {
  lamellar::FlowConfig cfg;
  cfg.dt = c.dt;
  if (!c.use_default_stabilization) cfg.stabilization = c.stabilization;
  cfg.max_steps = c.max_steps;
  cfg.energy_tolerance = c.energy_tolerance;
  cfg.stall_window = c.stall_window;
  cfg.max_halvings = c.max_halvings;
  cfg.overshoot_budget = c.overshoot_budget;
  cfg.include_potential = c.include_potential != 0;
  return cfg;
}

}  // namespace

extern "C" {

const char* lam_last_error(void) { return g_last_error.c_str(); }

const char* lam_status_name(lam_status status) {
  switch (status) {
    case LAM_OK: return "ok";
    case LAM_ERR_DOMAIN: return "domain error";
    case LAM_ERR_SINGULAR: return "singularity error";
    case LAM_ERR_RANGE: return "range error";
    case LAM_ERR_ORDERING: return "ordering error";
    case LAM_ERR_DETECTION: return "detection error";
    case LAM_ERR_NOT_CRITICAL: return "not-critical error";
    case LAM_ERR_NO_BRACKET: return "no-bracket error";
    case LAM_ERR_STEP_FAILURE: return "step failure";
    case LAM_ERR_LINE_SEARCH: return "line-search failure";
    case LAM_ERR_IO: return "i/o error";
    case LAM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LAM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* lam_version(void) { return LAMELLAR_VERSION_STRING; }

void lam_string_free(char* s) { std::free(s); }
void lam_buffer_free(double* buf) { std::free(buf); }

lam_status lam_normalization_c1s(double s, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = lamellar::normalization_c1s(s);
  });
}

lam_status lam_kernel_value(double x, double s, int tail_terms, double* value, double* tail_bound) {
  return guarded([&] {
    require(value, "null output");
    const auto r = lamellar::kernel_sample(
        x, lamellar::KernelParams(s, tail_terms > 0 ? tail_terms : lamellar::kDefaultTailTerms));
    *value = r.value;
    if (tail_bound) *tail_bound = r.tail_bound;
  });
}

lam_status lam_kernel_primitive(double t, double s, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = lamellar::kernel_primitive(t, s);
  });
}

lam_status lam_green_value(double x, double gamma, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = lamellar::green_value(x, lamellar::GreenParams(gamma));
  });
}

lam_status lam_green_double_primitive(double t, double gamma, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = lamellar::green_double_primitive(t, lamellar::GreenParams(gamma));
  });
}

lam_status lam_profile_create(const double* interfaces, size_t n, lam_profile** out) {
  return guarded([&] {
    require(out && (interfaces || n == 0), "null argument");
    *out = new lam_profile{lamellar::StepProfile(std::vector<double>(interfaces, interfaces + n))};
  });
}

lam_status lam_profile_create_with_mass(const double* interfaces, size_t n, double mass,
                                        lam_profile** out) {
  return guarded([&] {
    require(out && (interfaces || n == 0), "null argument");
    *out = new lam_profile{
        lamellar::StepProfile(std::vector<double>(interfaces, interfaces + n), mass)};
  });
}

lam_status lam_profile_equidistributed(int n, lam_profile** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new lam_profile{lamellar::make_equidistributed(n)};
  });
}

lam_status lam_profile_clone(const lam_profile* p, lam_profile** out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = new lam_profile{p->value};
  });
}

void lam_profile_free(lam_profile* p) { delete p; }

size_t lam_profile_size(const lam_profile* p) { return p ? p->value.n_interfaces() : 0; }

double lam_profile_mass(const lam_profile* p) { return p ? p->value.mass() : 0.0; }

lam_status lam_profile_interfaces(const lam_profile* p, double* out, size_t cap) {
  return guarded([&] {
    require(p && (out || cap == 0), "null argument");
    const auto& x = p->value.interfaces();
    for (size_t i = 0; i < cap && i < x.size(); ++i) out[i] = x[i];
  });
}

lam_status lam_profile_evaluate(const lam_profile* p, double x, int* out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = lamellar::evaluate(p->value, x);
  });
}

lam_status lam_profile_perturb(const lam_profile* p, const double* v, size_t n, double t,
                               lam_profile** out) {
  return guarded([&] {
    require(p && v && out, "null argument");
    lamellar::TangentVector tv(std::vector<double>(v, v + n));
    *out = new lam_profile{lamellar::perturb(p->value, tv, t)};
  });
}

lam_status lam_l2_distance(const lam_profile* p, const lam_profile* q, double* out) {
  return guarded([&] {
    require(p && q && out, "null argument");
    *out = lamellar::l2_distance(p->value, q->value);
  });
}

lam_status lam_nearest_step_profile(const double* samples, size_t m, int n, lam_profile** out) {
  return guarded([&] {
    require(samples && out, "null argument");
    *out = new lam_profile{lamellar::nearest_step_profile(std::vector<double>(samples, samples + m), n)};
  });
}

lam_status lam_profile_to_json(const lam_profile* p, char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = dup_string(lamellar::profile_to_json(p->value));
  });
}

lam_status lam_profile_from_json(const char* text, lam_profile** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new lam_profile{lamellar::profile_from_json(text)};
  });
}

lam_status lam_tangent_project(const double* w, size_t n, double* out) {
  return guarded([&] {
    require(w && out, "null argument");
    const auto t = lamellar::tangent_project(std::vector<double>(w, w + n));
    for (size_t i = 0; i < n; ++i) out[i] = t.components()[i];
  });
}

lam_status lam_tangent_noise(int n, double amplitude, uint64_t seed, double* out) {
  return guarded([&] {
    require(out, "null output");
    const auto t = lamellar::tangent_noise(n, amplitude, seed);
    for (size_t i = 0; i < t.size(); ++i) out[i] = t.components()[i];
  });
}

lam_status lam_model_create(double s, double gamma, double m, double epsilon, int tail_terms,
                            lam_model** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new lam_model{lamellar::SharpEnergy(lamellar::ModelParams(
        s, gamma, m, epsilon, tail_terms > 0 ? tail_terms : lamellar::kDefaultTailTerms))};
  });
}

void lam_model_free(lam_model* model) { delete model; }

lam_status lam_energy_total(const lam_model* model, const lam_profile* p, lam_energy* out) {
  return guarded([&] {
    require(model && p && out, "null argument");
    *out = to_c(model->energy.energy(p->value));
  });
}

lam_status lam_grad(const lam_model* model, const lam_profile* p, double* out, size_t n) {
  return guarded([&] {
    require(model && p && out, "null argument");
    require(n == p->value.n_interfaces(), "gradient buffer size must equal N");
    const auto g = model->energy.gradient(p->value);
    for (size_t i = 0; i < n; ++i) out[i] = g[i];
  });
}

lam_status lam_hessian(const lam_model* model, const lam_profile* p, double* out, size_t n) {
  return guarded([&] {
    require(model && p && out, "null argument");
    require(n == p->value.n_interfaces(), "hessian dimension must equal N");
    const auto h = model->energy.hessian(p->value);
    for (size_t i = 0; i < n * n; ++i) out[i] = h.data()[i];
  });
}

lam_status lam_lagrange_multiplier(const lam_model* model, const lam_profile* p, double* out) {
  return guarded([&] {
    require(model && p && out, "null argument");
    *out = model->energy.lagrange_multiplier(p->value);
  });
}

lam_status lam_K_from_v(const lam_profile* p, double gamma, double* out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = lamellar::K_from_v(p->value, lamellar::GreenParams(gamma));
  });
}

lam_status lam_v_explicit(double x, int n, double gamma, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = lamellar::v_explicit(x, n, lamellar::GreenParams(gamma));
  });
}

lam_status lam_vprime_explicit(double x, int n, double gamma, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = lamellar::vprime_explicit(x, n, lamellar::GreenParams(gamma));
  });
}

lam_status lam_spectrum_create(const lam_model* model, int n, lam_spectrum** out) {
  return guarded([&] {
    require(model && out, "null argument");
    const auto& mp = model->energy.params();
    auto* spec = new lam_spectrum{};
    try {
      spec->report = lamellar::classify(n, mp);
      spec->row = lamellar::circulant_row_at_UN(n, model->energy).entries();
      for (int l = 1; l < n; ++l) {
        spec->kernel_parts.push_back(lamellar::kernel_part(n, l, model->energy.kernel()));
        spec->green_parts.push_back(lamellar::green_part(n, l, mp.green_params()));
      }
    } catch (...) {
      delete spec;
      throw;
    }
    *out = spec;
  });
}

void lam_spectrum_free(lam_spectrum* spec) { delete spec; }

int lam_spectrum_size(const lam_spectrum* spec) { return spec ? spec->report.n : 0; }

lam_status lam_spectrum_eigenvalue(const lam_spectrum* spec, int l, double* out) {
  return guarded([&] {
    require(spec && out, "null argument");
    require(l >= 0 && l < spec->report.n, "mode index out of range");
    *out = spec->report.eigenvalues[l];
  });
}

lam_status lam_spectrum_row_entry(const lam_spectrum* spec, int k, double* out) {
  return guarded([&] {
    require(spec && out, "null argument");
    require(k >= 0 && k < spec->report.n, "row index out of range");
    *out = spec->row[k];
  });
}

lam_status lam_spectrum_kernel_part(const lam_spectrum* spec, int l, double* out) {
  return guarded([&] {
    require(spec && out, "null argument");
    require(l >= 1 && l < spec->report.n, "mode index out of range");
    *out = spec->kernel_parts[l - 1];
  });
}

lam_status lam_spectrum_green_part(const lam_spectrum* spec, int l, double* out) {
  return guarded([&] {
    require(spec && out, "null argument");
    require(l >= 1 && l < spec->report.n, "mode index out of range");
    *out = spec->green_parts[l - 1];
  });
}

lam_stability lam_spectrum_classification(const lam_spectrum* spec) {
  switch (spec->report.classification) {
    case lamellar::Stability::kLocalMin: return LAM_LOCAL_MIN;
    case lamellar::Stability::kSaddle: return LAM_SADDLE;
    case lamellar::Stability::kMarginal: return LAM_MARGINAL;
  }
  return LAM_MARGINAL;
}

int lam_spectrum_min_constrained(const lam_spectrum* spec, double* out) {
  if (!spec || !spec->report.min_constrained) return 0;
  if (out) *out = *spec->report.min_constrained;
  return 1;
}

double lam_spectrum_tolerance(const lam_spectrum* spec) { return spec ? spec->report.tolerance : 0.0; }

const char* lam_stability_name(lam_stability s) {
  switch (s) {
    case LAM_LOCAL_MIN: return "LocalMin";
    case LAM_SADDLE: return "Saddle";
    case LAM_MARGINAL: return "Marginal";
  }
  return "unknown";
}

lam_status lam_gamma0(int n, double s, double* out, int* bounded) {
  return guarded([&] {
    require(out && bounded, "null argument");
    const auto g = lamellar::gamma0(n, s);
    *bounded = g ? 1 : 0;
    if (g) *out = *g;
  });
}

lam_status lam_critical_gamma(int n, double s, int tail_terms, double* out, int* monotone) {
  return guarded([&] {
    require(out, "null output");
    const auto r = lamellar::critical_gamma(n, s, tail_terms > 0 ? tail_terms : lamellar::kDefaultTailTerms);
    *out = r.gamma;
    if (monotone) *monotone = r.monotone ? 1 : 0;
  });
}

lam_status lam_green_part_closed_form(int n, int l, double gamma, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = lamellar::green_part_closed_form(n, l, lamellar::GreenParams(gamma));
  });
}

void lam_descent_config_default(lam_descent_config* cfg) {
  if (!cfg) return;
  const lamellar::DescentConfig d;
  cfg->max_iterations = d.max_iterations;
  cfg->gradient_tolerance = d.gradient_tolerance;
  cfg->max_halvings = d.max_halvings;
}

lam_status lam_descent_run(const lam_model* model, const lam_profile* start,
                           const lam_descent_config* cfg, lam_descent_result** out) {
  return guarded([&] {
    require(model && start && out, "null argument");
    lamellar::DescentConfig c;
    if (cfg) {
      c.max_iterations = cfg->max_iterations;
      c.gradient_tolerance = cfg->gradient_tolerance;
      c.max_halvings = cfg->max_halvings;
    }
    require(c.max_iterations >= 0 && c.max_halvings >= 0 && c.gradient_tolerance > 0.0,
            "invalid descent configuration");
    *out = new lam_descent_result{lamellar::projected_descent(model->energy, start->value, c)};
  });
}

void lam_descent_result_free(lam_descent_result* r) { delete r; }

lam_descent_status lam_descent_result_status(const lam_descent_result* r) {
  switch (r->value.status) {
    case lamellar::DescentStatus::kConverged: return LAM_DESCENT_CONVERGED;
    case lamellar::DescentStatus::kIterationCap: return LAM_DESCENT_ITERATION_CAP;
    case lamellar::DescentStatus::kBoundary: return LAM_DESCENT_BOUNDARY;
  }
  return LAM_DESCENT_ITERATION_CAP;
}

const char* lam_descent_status_name(lam_descent_status s) {
  switch (s) {
    case LAM_DESCENT_CONVERGED: return "converged";
    case LAM_DESCENT_ITERATION_CAP: return "iteration_cap";
    case LAM_DESCENT_BOUNDARY: return "boundary";
  }
  return "unknown";
}

int lam_descent_result_iterations(const lam_descent_result* r) { return r ? r->value.iterations : 0; }

size_t lam_descent_result_trace_size(const lam_descent_result* r) { return r ? r->value.trace.size() : 0; }

lam_status lam_descent_result_trace(const lam_descent_result* r, size_t i, lam_descent_step* out) {
  return guarded([&] {
    require(r && out, "null argument");
    require(i < r->value.trace.size(), "trace index out of range");
    const auto& t = r->value.trace[i];
    *out = {t.iteration, t.step, t.energy, t.gradient_norm};
  });
}

lam_status lam_descent_result_final(const lam_descent_result* r, lam_profile** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = new lam_profile{r->value.final_profile};
  });
}

lam_status lam_grid_create(const double* values, size_t m_points, double s, double gamma, double m,
                           double epsilon, int mean_correct, lam_grid** out) {
  return guarded([&] {
    require(values && out, "null argument");
    const lamellar::ModelParams mp(s, gamma, m, epsilon);
    std::vector<double> v(values, values + m_points);
    *out = new lam_grid{mean_correct ? lamellar::GridState::from_samples(std::move(v), mp)
                                     : lamellar::GridState(std::move(v), mp)};
  });
}

lam_status lam_grid_from_profile(const lam_profile* p, size_t m_points, double s, double gamma,
                                 double epsilon, lam_grid** out) {
  return guarded([&] {
    require(p && out, "null argument");
    const lamellar::ModelParams mp(s, gamma, p->value.mass(), epsilon);
    std::vector<double> v(m_points);
    for (size_t j = 0; j < m_points; ++j) {
      v[j] = lamellar::evaluate(p->value, static_cast<double>(j) / static_cast<double>(m_points));
    }
    *out = new lam_grid{lamellar::GridState::from_samples(std::move(v), mp)};
  });
}

void lam_grid_free(lam_grid* g) { delete g; }

size_t lam_grid_size(const lam_grid* g) { return g ? g->value.points() : 0; }

lam_status lam_grid_values(const lam_grid* g, double* out, size_t cap) {
  return guarded([&] {
    require(g && (out || cap == 0), "null argument");
    const auto& v = g->value.values();
    for (size_t i = 0; i < cap && i < v.size(); ++i) out[i] = v[i];
  });
}

lam_status lam_grid_energy(const lam_grid* g, lam_energy* out) {
  return guarded([&] {
    require(g && out, "null argument");
    *out = to_c(lamellar::energy_eps(g->value));
  });
}

void lam_flow_config_default(lam_flow_config* cfg) {
  if (!cfg) return;
  const lamellar::FlowConfig d;
  cfg->dt = d.dt;
  cfg->stabilization = 0.0;
  cfg->use_default_stabilization = 1;
  cfg->max_steps = d.max_steps;
  cfg->energy_tolerance = d.energy_tolerance;
  cfg->stall_window = d.stall_window;
  cfg->max_halvings = d.max_halvings;
  cfg->overshoot_budget = d.overshoot_budget;
  cfg->include_potential = d.include_potential ? 1 : 0;
}

lam_status lam_flow_run(const lam_grid* g, const lam_flow_config* cfg, lam_flow_result** out) {
  return guarded([&] {
    require(g && cfg && out, "null argument");
    *out = new lam_flow_result{lamellar::run_flow(g->value, to_cpp(*cfg))};
  });
}

void lam_flow_result_free(lam_flow_result* r) { delete r; }
int lam_flow_result_steps(const lam_flow_result* r) { return r ? r->value.steps : 0; }
int lam_flow_result_converged(const lam_flow_result* r) { return r && r->value.converged ? 1 : 0; }
int lam_flow_result_rejected(const lam_flow_result* r) { return r ? r->value.rejected : 0; }
double lam_flow_result_mean_drift(const lam_flow_result* r) { return r ? r->value.max_mean_drift : 0.0; }
size_t lam_flow_result_trace_size(const lam_flow_result* r) { return r ? r->value.trace.size() : 0; }

lam_status lam_flow_result_trace(const lam_flow_result* r, size_t i, lam_trace_row* out) {
  return guarded([&] {
    require(r && out, "null argument");
    require(i < r->value.trace.size(), "trace index out of range");
    const auto& t = r->value.trace[i];
    *out = {t.step, t.dt, to_c(t.energy)};
  });
}

lam_status lam_flow_result_state(const lam_flow_result* r, lam_grid** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = new lam_grid{r->value.state};
  });
}

lam_status lam_gamma_limit(const double* eps, size_t n_eps, const lam_grid* base,
                           const lam_flow_config* cfg, int target_n, lam_gamma_records** out) {
  return guarded([&] {
    require(eps && base && cfg && out, "null argument");
    lamellar::GridState final_state = base->value;
    auto records = lamellar::gamma_limit_experiment(std::vector<double>(eps, eps + n_eps), base->value,
                                                    to_cpp(*cfg), target_n, &final_state);
    *out = new lam_gamma_records{std::move(records), std::move(final_state)};
  });
}

void lam_gamma_records_free(lam_gamma_records* r) { delete r; }
size_t lam_gamma_records_size(const lam_gamma_records* r) { return r ? r->records.size() : 0; }

lam_status lam_gamma_records_get(const lam_gamma_records* r, size_t i, lam_gamma_record* out) {
  return guarded([&] {
    require(r && out, "null argument");
    require(i < r->records.size(), "record index out of range");
    const auto& g = r->records[i];
    *out = {g.epsilon, to_c(g.energy), g.nearest ? 1 : 0, g.distance, g.sharp_energy, g.energy_gap,
            g.steps, g.converged ? 1 : 0, g.energy_monotone ? 1 : 0, g.max_mean_drift};
  });
}

lam_status lam_gamma_records_nearest(const lam_gamma_records* r, size_t i, lam_profile** out) {
  return guarded([&] {
    require(r && out, "null argument");
    require(i < r->records.size(), "record index out of range");
    if (!r->records[i].nearest) lamellar::fail(lamellar::ErrorCode::kDetection, "no step profile was detected for this record");
    *out = new lam_profile{*r->records[i].nearest};
  });
}

size_t lam_gamma_records_trace_size(const lam_gamma_records* r, size_t i) {
  return r && i < r->records.size() ? r->records[i].trace.size() : 0;
}

lam_status lam_gamma_records_trace(const lam_gamma_records* r, size_t i, size_t j, lam_trace_row* out) {
  return guarded([&] {
    require(r && out, "null argument");
    require(i < r->records.size() && j < r->records[i].trace.size(), "trace index out of range");
    const auto& t = r->records[i].trace[j];
    *out = {t.step, t.dt, to_c(t.energy)};
  });
}

lam_status lam_gamma_records_state(const lam_gamma_records* r, lam_grid** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = new lam_grid{r->state};
  });
}

lam_status lam_checkpoint_save(const char* path, const double* values, size_t m_points) {
  return guarded([&] {
    require(path && values, "null argument");
    lamellar::save_checkpoint(path, std::vector<double>(values, values + m_points));
  });
}

lam_status lam_checkpoint_load(const char* path, double** values, size_t* m_points) {
  return guarded([&] {
    require(path && values && m_points, "null argument");
    const auto v = lamellar::load_checkpoint(path);
    auto* buf = static_cast<double*>(std::malloc(std::max<size_t>(1, v.size()) * sizeof(double)));
    if (!buf) throw std::bad_alloc();
    for (size_t i = 0; i < v.size(); ++i) buf[i] = v[i];
    *values = buf;
    *m_points = v.size();
  });
}

}  // extern "C"
