#ifndef LAMELLAR_H
#define LAMELLAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(LAMELLAR_BUILDING_LIBRARY)
#define LAM_API __attribute__((visibility("default")))
#else
#define LAM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lam_status {
  LAM_OK = 0,
  LAM_ERR_DOMAIN = 1,
  LAM_ERR_SINGULAR = 2,
  LAM_ERR_RANGE = 3,
  LAM_ERR_ORDERING = 4,
  LAM_ERR_DETECTION = 5,
  LAM_ERR_NOT_CRITICAL = 6,
  LAM_ERR_NO_BRACKET = 7,
  LAM_ERR_STEP_FAILURE = 8,
  LAM_ERR_LINE_SEARCH = 9,
  LAM_ERR_IO = 10,
  LAM_ERR_INVALID_ARGUMENT = 11,
  LAM_ERR_INTERNAL = 99
} lam_status;

/* Message of the last failing call on this thread ("" if none). */
LAM_API const char* lam_last_error(void);
LAM_API const char* lam_status_name(lam_status status);
LAM_API const char* lam_version(void);
LAM_API void lam_string_free(char* s);
LAM_API void lam_buffer_free(double* buf);

/* ---- kernels ---- */

LAM_API lam_status lam_normalization_c1s(double s, double* out);
/* tail_bound may be NULL. */
LAM_API lam_status lam_kernel_value(double x, double s, int tail_terms, double* value,
                                    double* tail_bound);
LAM_API lam_status lam_kernel_primitive(double t, double s, double* out);
LAM_API lam_status lam_green_value(double x, double gamma, double* out);
LAM_API lam_status lam_green_double_primitive(double t, double gamma, double* out);

/* ---- step profiles ---- */

typedef struct lam_profile lam_profile;

LAM_API lam_status lam_profile_create(const double* interfaces, size_t n, lam_profile** out);
LAM_API lam_status lam_profile_create_with_mass(const double* interfaces, size_t n, double mass,
                                                lam_profile** out);
LAM_API lam_status lam_profile_equidistributed(int n, lam_profile** out);
LAM_API lam_status lam_profile_clone(const lam_profile* p, lam_profile** out);
LAM_API void lam_profile_free(lam_profile* p);
LAM_API size_t lam_profile_size(const lam_profile* p);
LAM_API double lam_profile_mass(const lam_profile* p);
/* Copies min(cap, N) interfaces. */
LAM_API lam_status lam_profile_interfaces(const lam_profile* p, double* out, size_t cap);
LAM_API lam_status lam_profile_evaluate(const lam_profile* p, double x, int* out);
LAM_API lam_status lam_profile_perturb(const lam_profile* p, const double* v, size_t n, double t,
                                       lam_profile** out);
LAM_API lam_status lam_l2_distance(const lam_profile* p, const lam_profile* q, double* out);
LAM_API lam_status lam_nearest_step_profile(const double* samples, size_t m, int n,
                                            lam_profile** out);
/* JSON {"N","m","interfaces"}; release with lam_string_free. */
LAM_API lam_status lam_profile_to_json(const lam_profile* p, char** out);
LAM_API lam_status lam_profile_from_json(const char* text, lam_profile** out);

LAM_API lam_status lam_tangent_project(const double* w, size_t n, double* out);
/* Seeded tangent perturbation of max-norm `amplitude`, n components. */
LAM_API lam_status lam_tangent_noise(int n, double amplitude, uint64_t seed, double* out);

/* ---- sharp-interface model ---- */

typedef struct lam_model lam_model;

typedef struct lam_energy {
  double h;
  double w;
  double k;
  double total;
} lam_energy;

/* tail_terms <= 0 selects the default. */
LAM_API lam_status lam_model_create(double s, double gamma, double m, double epsilon,
                                    int tail_terms, lam_model** out);
LAM_API void lam_model_free(lam_model* model);
LAM_API lam_status lam_energy_total(const lam_model* model, const lam_profile* p, lam_energy* out);
LAM_API lam_status lam_grad(const lam_model* model, const lam_profile* p, double* out, size_t n);
/* Row-major n*n. */
LAM_API lam_status lam_hessian(const lam_model* model, const lam_profile* p, double* out, size_t n);
LAM_API lam_status lam_lagrange_multiplier(const lam_model* model, const lam_profile* p,
                                           double* out);
LAM_API lam_status lam_K_from_v(const lam_profile* p, double gamma, double* out);
LAM_API lam_status lam_v_explicit(double x, int n, double gamma, double* out);
LAM_API lam_status lam_vprime_explicit(double x, int n, double gamma, double* out);

/* ---- spectrum ---- */

typedef enum lam_stability { LAM_LOCAL_MIN = 0, LAM_SADDLE = 1, LAM_MARGINAL = 2 } lam_stability;

typedef struct lam_spectrum lam_spectrum;

LAM_API lam_status lam_spectrum_create(const lam_model* model, int n, lam_spectrum** out);
LAM_API void lam_spectrum_free(lam_spectrum* spec);
LAM_API int lam_spectrum_size(const lam_spectrum* spec);
LAM_API lam_status lam_spectrum_eigenvalue(const lam_spectrum* spec, int l, double* out);
/* Row entries a_0..a_{N-1}. */
LAM_API lam_status lam_spectrum_row_entry(const lam_spectrum* spec, int k, double* out);
/* l in 1..N-1. */
LAM_API lam_status lam_spectrum_kernel_part(const lam_spectrum* spec, int l, double* out);
LAM_API lam_status lam_spectrum_green_part(const lam_spectrum* spec, int l, double* out);
LAM_API lam_stability lam_spectrum_classification(const lam_spectrum* spec);
/* Returns 0 and leaves *out untouched when N = 2. */
LAM_API int lam_spectrum_min_constrained(const lam_spectrum* spec, double* out);
LAM_API double lam_spectrum_tolerance(const lam_spectrum* spec);
LAM_API const char* lam_stability_name(lam_stability s);

/* *bounded = 0 for N = 2 (no threshold). */
LAM_API lam_status lam_gamma0(int n, double s, double* out, int* bounded);
/* monotone may be NULL. */
LAM_API lam_status lam_critical_gamma(int n, double s, int tail_terms, double* out, int* monotone);
LAM_API lam_status lam_green_part_closed_form(int n, int l, double gamma, double* out);

/* ---- projected descent ---- */

typedef struct lam_descent_config {
  int max_iterations;
  double gradient_tolerance;
  int max_halvings;
} lam_descent_config;

typedef enum lam_descent_status {
  LAM_DESCENT_CONVERGED = 0,
  LAM_DESCENT_ITERATION_CAP = 1,
  LAM_DESCENT_BOUNDARY = 2
} lam_descent_status;

typedef struct lam_descent_step {
  int iteration;
  double step;
  double energy;
  double gradient_norm;
} lam_descent_step;

typedef struct lam_descent_result lam_descent_result;

LAM_API void lam_descent_config_default(lam_descent_config* cfg);
LAM_API lam_status lam_descent_run(const lam_model* model, const lam_profile* start,
                                   const lam_descent_config* cfg, lam_descent_result** out);
LAM_API void lam_descent_result_free(lam_descent_result* r);
LAM_API lam_descent_status lam_descent_result_status(const lam_descent_result* r);
LAM_API const char* lam_descent_status_name(lam_descent_status s);
LAM_API int lam_descent_result_iterations(const lam_descent_result* r);
LAM_API size_t lam_descent_result_trace_size(const lam_descent_result* r);
LAM_API lam_status lam_descent_result_trace(const lam_descent_result* r, size_t i,
                                            lam_descent_step* out);
LAM_API lam_status lam_descent_result_final(const lam_descent_result* r, lam_profile** out);

/* ---- phase field ---- */

typedef struct lam_grid lam_grid;

typedef struct lam_flow_config {
  double dt;
  double stabilization; /* used only when use_default_stabilization == 0 */
  int use_default_stabilization;
  int max_steps;
  double energy_tolerance;
  int stall_window;
  int max_halvings;
  double overshoot_budget;
  int include_potential;
} lam_flow_config;

typedef struct lam_trace_row {
  int step;
  double dt;
  lam_energy energy;
} lam_trace_row;

typedef struct lam_gamma_record {
  double epsilon;
  lam_energy energy;
  /* 0 when the relaxed state has fewer than N sign changes; the next three fields are then NaN. */
  int has_nearest;
  double distance;
  double sharp_energy;
  double energy_gap;
  int steps;
  int converged;
  int energy_monotone;
  double max_mean_drift;
} lam_gamma_record;

typedef struct lam_flow_result lam_flow_result;
typedef struct lam_gamma_records lam_gamma_records;

/* mean_correct != 0 shifts the samples so that their mean equals m. */
LAM_API lam_status lam_grid_create(const double* values, size_t m_points, double s, double gamma,
                                   double m, double epsilon, int mean_correct, lam_grid** out);
LAM_API lam_status lam_grid_from_profile(const lam_profile* p, size_t m_points, double s,
                                         double gamma, double epsilon, lam_grid** out);
LAM_API void lam_grid_free(lam_grid* g);
LAM_API size_t lam_grid_size(const lam_grid* g);
LAM_API lam_status lam_grid_values(const lam_grid* g, double* out, size_t cap);
LAM_API lam_status lam_grid_energy(const lam_grid* g, lam_energy* out);

LAM_API void lam_flow_config_default(lam_flow_config* cfg);
LAM_API lam_status lam_flow_run(const lam_grid* g, const lam_flow_config* cfg,
                                lam_flow_result** out);
LAM_API void lam_flow_result_free(lam_flow_result* r);
LAM_API int lam_flow_result_steps(const lam_flow_result* r);
LAM_API int lam_flow_result_converged(const lam_flow_result* r);
LAM_API int lam_flow_result_rejected(const lam_flow_result* r);
LAM_API double lam_flow_result_mean_drift(const lam_flow_result* r);
LAM_API size_t lam_flow_result_trace_size(const lam_flow_result* r);
LAM_API lam_status lam_flow_result_trace(const lam_flow_result* r, size_t i, lam_trace_row* out);
LAM_API lam_status lam_flow_result_state(const lam_flow_result* r, lam_grid** out);

LAM_API lam_status lam_gamma_limit(const double* eps, size_t n_eps, const lam_grid* base,
                                   const lam_flow_config* cfg, int target_n,
                                   lam_gamma_records** out);
LAM_API void lam_gamma_records_free(lam_gamma_records* r);
LAM_API size_t lam_gamma_records_size(const lam_gamma_records* r);
LAM_API lam_status lam_gamma_records_get(const lam_gamma_records* r, size_t i,
                                         lam_gamma_record* out);
LAM_API lam_status lam_gamma_records_nearest(const lam_gamma_records* r, size_t i,
                                             lam_profile** out);
LAM_API size_t lam_gamma_records_trace_size(const lam_gamma_records* r, size_t i);
LAM_API lam_status lam_gamma_records_trace(const lam_gamma_records* r, size_t i, size_t j,
                                           lam_trace_row* out);
/* Relaxed state after the last schedule entry. */
LAM_API lam_status lam_gamma_records_state(const lam_gamma_records* r, lam_grid** out);

LAM_API lam_status lam_checkpoint_save(const char* path, const double* values, size_t m_points);
/* Release *values with lam_buffer_free. */
LAM_API lam_status lam_checkpoint_load(const char* path, double** values, size_t* m_points);

#ifdef __cplusplus
}
#endif

#endif
