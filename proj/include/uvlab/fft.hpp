#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace uvlab {

/// Cached real-to-complex FFT pair on an N^d periodic grid (row-major, last
/// axis halved in the complex layout). Execution is thread-safe; plans are
/// created once per (d, N) under a global lock.
class RealFft {
 public:
  static std::shared_ptr<const RealFft> get(int d, int n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t real_size() const { return real_size_; }
  std::size_t complex_size() const { return complex_size_; }

  /// out[k] = sum_x in[x] exp(-i k.x)
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// out[x] = sum_k in[k] exp(+i k.x), unnormalized; `in` is overwritten.
  void inverse(std::span<std::complex<double>> in, std::span<double> out) const;

 private:
  RealFft(int d, int n);
  std::size_t real_size_;
  std::size_t complex_size_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace uvlab
