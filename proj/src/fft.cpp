#include "msparse/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace msparse {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan3::FftPlan3(int n) : n_(n) {
  const std::size_t real_size = static_cast<std::size_t>(n) * n * n;
  const std::size_t complex_size = static_cast<std::size_t>(n) * n * (n / 2 + 1);
  double* r = fftw_alloc_real(real_size);
  fftw_complex* c = fftw_alloc_complex(complex_size);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_r2c_3d(n, n, n, r, c, flags);
  inverse_plan_ = fftw_plan_dft_c2r_3d(n, n, n, c, r, flags);
  fftw_free(r);
  fftw_free(c);
}

FftPlan3::~FftPlan3() {
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

const FftPlan3& FftPlan3::get(int n) {
  static std::map<int, std::unique_ptr<FftPlan3>> plans;
  std::lock_guard lock(planner_mutex());
  auto it = plans.find(n);
  if (it == plans.end()) it = plans.emplace(n, std::unique_ptr<FftPlan3>(new FftPlan3(n))).first;
  return *it->second;
}

void FftPlan3::forward(const double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void FftPlan3::inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(in),
                       out);
}

}  // namespace msparse
