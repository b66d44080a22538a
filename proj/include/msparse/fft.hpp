#pragma once

#include <complex>

namespace msparse {

/// Real-to-complex 3D transforms of an n^3 C-order array. Plans are created
/// once per size with FFTW_ESTIMATE so repeated runs produce identical bits.
class FftPlan3 {
 public:
  static const FftPlan3& get(int n);

  /// Unnormalized forward transform into n*n*(n/2+1) coefficients.
  void forward(const double* in, std::complex<double>* out) const;
  /// Unnormalized inverse transform. Overwrites `in`.
  void inverse(std::complex<double>* in, double* out) const;

  FftPlan3(const FftPlan3&) = delete;
  FftPlan3& operator=(const FftPlan3&) = delete;
  ~FftPlan3();

 private:
  explicit FftPlan3(int n);

  int n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace msparse
