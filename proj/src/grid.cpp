#include "msparse/grid.hpp"

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "msparse/fft.hpp"

namespace msparse {

using cd = std::complex<double>;

Grid3::Grid3(int n, double box_len) : n_(n), box_len_(box_len) {
  if (n < 8 || n % 2 != 0) throw RangeError("grid size must be even and at least 8");
  if (!(box_len > 2.0) || !std::isfinite(box_len)) throw RangeError("box length must exceed 2");
}

Index3 Grid3::nearest_voxel(const Point& x) const {
  Index3 idx;
  for (int a = 0; a < 3; ++a) idx[a] = wrap(static_cast<int>(std::lround(x[a] / spacing())));
  return idx;
}

Point Grid3::displacement(const Point& a, const Point& b) const {
  Point d = b - a;
  for (int c = 0; c < 3; ++c) d[c] -= box_len_ * std::round(d[c] / box_len_);
  return d;
}

// ---------------------------------------------------------------------------

SpectralArray forward_transform(const ScalarField& f) {
  const Grid3& g = f.grid();
  SpectralArray out(g.spectral_size());
  FftPlan3::get(g.n()).forward(f.data().data(), out.data());
  return out;
}

ScalarField inverse_transform(const Grid3& grid, const SpectralArray& spectrum) {
  SpectralArray scratch = spectrum;
  ScalarField out(grid);
  FftPlan3::get(grid.n()).inverse(scratch.data(), out.data().data());
  out.data() /= static_cast<double>(grid.size());
  return out;
}

namespace {

/// Calls fn(flat_spectral_index, kx, ky, kz) with Nyquist components zeroed.
template <typename Fn>
void for_each_mode(const Grid3& g, Fn&& fn) {
  const int n = g.n();
  const int nz = n / 2 + 1;
  Eigen::Index s = 0;
  for (int i = 0; i < n; ++i) {
    const double kx = (i == n / 2) ? 0.0 : g.wavenumber(i);
    for (int j = 0; j < n; ++j) {
      const double ky = (j == n / 2) ? 0.0 : g.wavenumber(j);
      for (int k = 0; k < nz; ++k, ++s) {
        const double kz = (k == n / 2) ? 0.0 : g.wavenumber(k);
        fn(s, kx, ky, kz);
      }
    }
  }
}

std::array<SpectralArray, 3> transform_components(const VectorField& f) {
  return {forward_transform(f.component_field(0)), forward_transform(f.component_field(1)),
          forward_transform(f.component_field(2))};
}

VectorField assemble(const Grid3& g, const std::array<SpectralArray, 3>& spec) {
  VectorField out(g);
  for (int c = 0; c < 3; ++c) out.set_component(c, inverse_transform(g, spec[c]));
  return out;
}

}  // namespace

VectorField curl(const VectorField& f) {
  const Grid3& g = f.grid();
  const auto u = transform_components(f);
  std::array<SpectralArray, 3> w{SpectralArray(g.spectral_size()), SpectralArray(g.spectral_size()),
                                 SpectralArray(g.spectral_size())};
  const cd I(0.0, 1.0);
  for_each_mode(g, [&](Eigen::Index s, double kx, double ky, double kz) {
    w[0][s] = I * (ky * u[2][s] - kz * u[1][s]);
    w[1][s] = I * (kz * u[0][s] - kx * u[2][s]);
    w[2][s] = I * (kx * u[1][s] - ky * u[0][s]);
  });
  return assemble(g, w);
}

ScalarField divergence(const VectorField& f) {
  const Grid3& g = f.grid();
  const auto u = transform_components(f);
  SpectralArray d(g.spectral_size());
  const cd I(0.0, 1.0);
  for_each_mode(g, [&](Eigen::Index s, double kx, double ky, double kz) {
    d[s] = I * (kx * u[0][s] + ky * u[1][s] + kz * u[2][s]);
  });
  return inverse_transform(g, d);
}

VectorField gradient(const ScalarField& phi) {
  const Grid3& g = phi.grid();
  const SpectralArray p = forward_transform(phi);
  std::array<SpectralArray, 3> out{SpectralArray(g.spectral_size()),
                                   SpectralArray(g.spectral_size()),
                                   SpectralArray(g.spectral_size())};
  const cd I(0.0, 1.0);
  for_each_mode(g, [&](Eigen::Index s, double kx, double ky, double kz) {
    out[0][s] = I * kx * p[s];
    out[1][s] = I * ky * p[s];
    out[2][s] = I * kz * p[s];
  });
  return assemble(g, out);
}

VectorField leray_project(const VectorField& f) {
  const Grid3& g = f.grid();
  auto u = transform_components(f);
  for_each_mode(g, [&](Eigen::Index s, double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) {
      u[0][s] = u[1][s] = u[2][s] = 0.0;
      return;
    }
    const cd kdotu = (kx * u[0][s] + ky * u[1][s] + kz * u[2][s]) / k2;
    u[0][s] -= kx * kdotu;
    u[1][s] -= ky * kdotu;
    u[2][s] -= kz * kdotu;
  });
  return assemble(g, u);
}

VectorField biot_savart(const VectorField& omega) {
  const Grid3& g = omega.grid();
  const auto w = transform_components(omega);
  std::array<SpectralArray, 3> u{SpectralArray(g.spectral_size()), SpectralArray(g.spectral_size()),
                                 SpectralArray(g.spectral_size())};
  const cd I(0.0, 1.0);
  for_each_mode(g, [&](Eigen::Index s, double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) {
      u[0][s] = u[1][s] = u[2][s] = 0.0;
      return;
    }
    u[0][s] = I * (ky * w[2][s] - kz * w[1][s]) / k2;
    u[1][s] = I * (kz * w[0][s] - kx * w[2][s]) / k2;
    u[2][s] = I * (kx * w[1][s] - ky * w[0][s]) / k2;
  });
  return assemble(g, u);
}

// ---------------------------------------------------------------------------

BallKernel::BallKernel(const Grid3& grid, double radius)
    : grid_(grid), radius_(radius), mask_(grid) {
  if (!(radius > 0.0) || !(radius < grid.box_len() / 2.0)) {
    throw RangeError("ball radius must lie in (0, box_len/2)");
  }
  const int n = grid.n();
  const double h = grid.spacing();
  const int reach = std::min(n / 2, static_cast<int>(std::ceil(radius / h)) + 1);
  for (int di = -reach; di <= reach; ++di) {
    for (int dj = -reach; dj <= reach; ++dj) {
      for (int dk = -reach; dk <= reach; ++dk) {
        if (!in_ball(di, dj, dk, radius, h)) continue;
        mask_.data()[grid.flat(di, dj, dk)] = 1.0;
      }
    }
  }
  voxel_count_ = static_cast<std::int64_t>(mask_.data().sum());
  spectrum_ = forward_transform(mask_);
}

double BallKernel::volume_error() const noexcept {
  const double exact = kUnitBallVolume * radius_ * radius_ * radius_;
  return std::abs(discrete_volume() - exact) / exact;
}

std::shared_ptr<const BallKernel> ball_kernel(const Grid3& grid, double radius) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const BallKernel>> cache;
  static std::deque<Key> order;
  constexpr std::size_t kMaxEntries = 48;

  const Key key{grid.n(), grid.box_len(), radius};
  std::shared_ptr<const BallKernel> kernel;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) kernel = it->second;
  }
  if (!kernel) {
    auto built = std::make_shared<const BallKernel>(grid, radius);
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.emplace(key, built);
    if (inserted) {
      order.push_back(key);
      if (order.size() > kMaxEntries) {
        cache.erase(order.front());
        order.pop_front();
      }
    }
    kernel = it->second;
  }
  return kernel;
}

ScalarField ball_sums(const ScalarField& density, double radius) {
  const Grid3& g = density.grid();
  const auto kernel = ball_kernel(g, radius);
  SpectralArray spec = forward_transform(density);
  spec *= kernel->spectrum();
  return inverse_transform(g, spec);
}

SlidingBallLp::SlidingBallLp(const VectorField& f, double p) : grid_(f.grid()), p_(p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw RangeError("exponent p must be finite and >= 1");
  const Eigen::ArrayXd sq = f.data().square().rowwise().sum();
  density_ = forward_transform(ScalarField(grid_, p == 2.0 ? sq : Eigen::ArrayXd(sq.pow(p / 2.0))));
}

ScalarField SlidingBallLp::operator()(double radius) const {
  if (!(radius > grid_.spacing()) || !(radius < grid_.box_len() / 2.0)) {
    throw RangeError("radius must lie in (spacing, box_len/2)");
  }
  const auto kernel = ball_kernel(grid_, radius);
  ScalarField sums = inverse_transform(grid_, density_ * kernel->spectrum());
  const double vol = grid_.voxel_volume();
  if (p_ == 2.0) {
    sums.data() = (sums.data().max(0.0) * vol).sqrt();
  } else if (p_ == 1.0) {
    sums.data() = sums.data().max(0.0) * vol;
  } else {
    sums.data() = (sums.data().max(0.0) * vol).pow(1.0 / p_);
  }
  return sums;
}

ScalarField sliding_ball_lp(const VectorField& f, double p, double radius) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw RangeError("exponent p must be finite and >= 1");
  const Grid3& g = f.grid();
  if (!(radius > g.spacing()) || !(radius < g.box_len() / 2.0)) {
    throw RangeError("radius must lie in (spacing, box_len/2)");
  }
  return SlidingBallLp(f, p)(radius);
}

double ball_lp_bruteforce(const VectorField& f, double p, const Index3& x, double radius) {
  const Grid3& g = f.grid();
  if (!(p >= 1.0) || !std::isfinite(p)) throw RangeError("exponent p must be finite and >= 1");
  if (!(radius > 0.0) || !(radius < g.box_len() / 2.0)) {
    throw RangeError("radius must lie in (0, box_len/2)");
  }
  const double h = g.spacing();
  const int reach = static_cast<int>(std::ceil(radius / h)) + 1;
  double total = 0.0;
  for (int di = -reach; di <= reach; ++di) {
    for (int dj = -reach; dj <= reach; ++dj) {
      for (int dk = -reach; dk <= reach; ++dk) {
        if (!in_ball(di, dj, dk, radius, h)) continue;
        const auto idx = g.flat(x[0] + di, x[1] + dj, x[2] + dk);
        double m2 = 0.0;
        for (int c = 0; c < 3; ++c) m2 += f.data()(idx, c) * f.data()(idx, c);
        total += std::pow(m2, p / 2.0);
      }
    }
  }
  return std::pow(total * g.voxel_volume(), 1.0 / p);
}

}  // namespace msparse
