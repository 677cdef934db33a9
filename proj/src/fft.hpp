#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lamellar::detail {

/// Real-to-half-complex transform pair of one length, owning its FFTW plans
/// and aligned buffers. Not shareable between threads; one per trajectory.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }

  /// out[k] = (1/n) Σ_j in[j] e^{-2πijk/n}, k = 0..n/2.
  void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out);
  /// Inverse of forward (includes the factor n).
  void inverse(const std::vector<std::complex<double>>& in, std::vector<double>& out);

 private:
  std::size_t n_;
  double* real_;
  void* spec_;
  void* plan_forward_;
  void* plan_inverse_;
};

}  // namespace lamellar::detail
