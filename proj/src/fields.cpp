#include "msparse/fields.hpp"

#include <random>

namespace msparse {

namespace {

SpectralArray random_spectrum(const Grid3& g, double kmax, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = g.n();
  const int nz = n / 2 + 1;
  SpectralArray spec = SpectralArray::Zero(g.spectral_size());
  Eigen::Index s = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < nz; ++k, ++s) {
        const double re = normal(rng);
        const double im = normal(rng);
        const int mi = g.mode(i), mj = g.mode(j), mk = g.mode(k);
        if (i == n / 2 || j == n / 2 || k == n / 2) continue;
        const double m2 = double(mi * mi + mj * mj + mk * mk);
        if (m2 > kmax * kmax) continue;
        spec[s] = std::complex<double>(re, im);
      }
    }
  }
  return spec;
}

}  // namespace

ScalarField random_band_limited_scalar(const Grid3& grid, double kmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ScalarField out = inverse_transform(grid, random_spectrum(grid, kmax, rng));
  const double sup = out.data().abs().maxCoeff();
  if (sup > 0.0) out.data() /= sup;
  return out;
}

VectorField random_band_limited_field(const Grid3& grid, double kmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  VectorField raw(grid);
  for (int c = 0; c < 3; ++c) raw.set_component(c, inverse_transform(grid, random_spectrum(grid, kmax, rng)));
  VectorField out = leray_project(raw);
  const double sup = sup_norm(out);
  if (sup > 0.0) out *= 1.0 / sup;
  return out;
}

}  // namespace msparse
