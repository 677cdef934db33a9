#pragma once

#include <lamellar/lamellar.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Carries the process exit code to main().
class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& msg) : std::runtime_error(msg), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

class LamError : public CliError {
 public:
  LamError(lam_status status, const std::string& msg)
      : CliError(exit_code_for(status), msg), status_(status) {}
  lam_status status() const noexcept { return status_; }

  static int exit_code_for(lam_status s) {
    return s == LAM_ERR_DOMAIN || s == LAM_ERR_INVALID_ARGUMENT ? kExitUsage : kExitNumerical;
  }

 private:
  lam_status status_;
};

inline void check(lam_status s, const char* what) {
  if (s != LAM_OK) {
    throw LamError(s, std::string(what) + ": " + lam_status_name(s) + ": " + lam_last_error());
  }
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const noexcept { Free(p); }
};

using Model = std::unique_ptr<lam_model, Deleter<lam_model, lam_model_free>>;
using Profile = std::unique_ptr<lam_profile, Deleter<lam_profile, lam_profile_free>>;
using Spectrum = std::unique_ptr<lam_spectrum, Deleter<lam_spectrum, lam_spectrum_free>>;
using DescentResult = std::unique_ptr<lam_descent_result, Deleter<lam_descent_result, lam_descent_result_free>>;
using Grid = std::unique_ptr<lam_grid, Deleter<lam_grid, lam_grid_free>>;
using FlowResult = std::unique_ptr<lam_flow_result, Deleter<lam_flow_result, lam_flow_result_free>>;
using GammaRecords = std::unique_ptr<lam_gamma_records, Deleter<lam_gamma_records, lam_gamma_records_free>>;

inline Model make_model(double s, double gamma, double m = 0.0, double eps = 1.0, int tail_terms = 0) {
  lam_model* p = nullptr;
  check(lam_model_create(s, gamma, m, eps, tail_terms, &p), "model");
  return Model(p);
}

inline Profile equidistributed(int n) {
  lam_profile* p = nullptr;
  check(lam_profile_equidistributed(n, &p), "profile");
  return Profile(p);
}

inline std::vector<double> interfaces(const lam_profile* p) {
  std::vector<double> x(lam_profile_size(p));
  check(lam_profile_interfaces(p, x.data(), x.size()), "profile interfaces");
  return x;
}

inline lam_energy energy(const lam_model* m, const lam_profile* p) {
  lam_energy e{};
  check(lam_energy_total(m, p, &e), "energy");
  return e;
}

}  // namespace cli
