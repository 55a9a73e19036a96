#include "uvlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "uvlab/errors.hpp"

namespace uvlab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(int d, int n) {
  std::vector<int> dims(d, n);
  real_size_ = 1;
  for (int i = 0; i < d; ++i) real_size_ *= static_cast<std::size_t>(n);
  complex_size_ = real_size_ / n * (n / 2 + 1);
  std::vector<double> re(real_size_);
  std::vector<std::complex<double>> co(complex_size_);
  auto* cptr = reinterpret_cast<fftw_complex*>(co.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_r2c(d, dims.data(), re.data(), cptr, flags);
  inverse_plan_ = fftw_plan_dft_c2r(d, dims.data(), cptr, re.data(), flags);
  if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("FFTW planning failed");
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

std::shared_ptr<const RealFft> RealFft::get(int d, int n) {
  // The mutex must outlive the cache: plans are destroyed under it at exit.
  auto& mutex = planner_mutex();
  static std::map<std::pair<int, int>, std::shared_ptr<const RealFft>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{d, n}];
  if (!slot) slot.reset(new RealFft(d, n));
  return slot;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != real_size_ || out.size() != complex_size_) {
    throw PreconditionError("RealFft::forward: buffer size mismatch");
  }
  // Out-of-place r2c leaves the input intact.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<std::complex<double>> in, std::span<double> out) const {
  if (in.size() != complex_size_ || out.size() != real_size_) {
    throw PreconditionError("RealFft::inverse: buffer size mismatch");
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

}  // namespace uvlab
