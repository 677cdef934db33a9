#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace lamellar::detail {

namespace {

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  real_ = fftw_alloc_real(n);
  auto* spec = fftw_alloc_complex(n / 2 + 1);
  if (!real_ || !spec) throw std::bad_alloc();
  spec_ = spec;
  const int len = static_cast<int>(n);
  plan_forward_ = fftw_plan_dft_r2c_1d(len, real_, spec, FFTW_ESTIMATE);
  plan_inverse_ = fftw_plan_dft_c2r_1d(len, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft::forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
  for (std::size_t j = 0; j < n_; ++j) real_[j] = in[j];
  fftw_execute(static_cast<fftw_plan>(plan_forward_));
  auto* spec = static_cast<fftw_complex*>(spec_);
  const double scale = 1.0 / static_cast<double>(n_);
  out.resize(n_ / 2 + 1);
  for (std::size_t k = 0; k <= n_ / 2; ++k) {
    out[k] = {spec[k][0] * scale, spec[k][1] * scale};
  }
}

void RealFft::inverse(const std::vector<std::complex<double>>& in, std::vector<double>& out) {
  auto* spec = static_cast<fftw_complex*>(spec_);
  for (std::size_t k = 0; k <= n_ / 2; ++k) {
    spec[k][0] = in[k].real();
    spec[k][1] = in[k].imag();
  }
  fftw_execute(static_cast<fftw_plan>(plan_inverse_));
  out.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = real_[j];
}

}  // namespace lamellar::detail
