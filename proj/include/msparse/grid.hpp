#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>

#include "msparse/errors.hpp"

namespace msparse {

using Point = Eigen::Vector3d;
using Index3 = Eigen::Array3i;
using SpectralArray = Eigen::ArrayXcd;

/// Volume of the unit ball in three dimensions.
inline constexpr double kUnitBallVolume = 4.0 * std::numbers::pi / 3.0;

/// Cubic periodic grid on the torus [0, L)^3. Voxel (i, j, k) is centered at
/// (i, j, k) * spacing; flat storage is C-order with k (the z index) fastest.
class Grid3 {
 public:
  explicit Grid3(int n, double box_len = 2.0 * std::numbers::pi);

  int n() const noexcept { return n_; }
  double box_len() const noexcept { return box_len_; }
  double spacing() const noexcept { return box_len_ / n_; }
  double voxel_volume() const noexcept { return std::pow(spacing(), 3); }
  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(n_) * n_ * n_; }

  /// Number of complex coefficients of a real-to-complex transform.
  Eigen::Index spectral_size() const noexcept {
    return static_cast<Eigen::Index>(n_) * n_ * (n_ / 2 + 1);
  }

  Eigen::Index flat(int i, int j, int k) const noexcept {
    return (static_cast<Eigen::Index>(wrap(i)) * n_ + wrap(j)) * n_ + wrap(k);
  }
  Eigen::Index flat(const Index3& idx) const noexcept { return flat(idx[0], idx[1], idx[2]); }

  Index3 unflat(Eigen::Index f) const noexcept {
    const auto k = static_cast<int>(f % n_);
    const auto j = static_cast<int>((f / n_) % n_);
    const auto i = static_cast<int>(f / (static_cast<Eigen::Index>(n_) * n_));
    return {i, j, k};
  }

  int wrap(int i) const noexcept { return ((i % n_) + n_) % n_; }

  Point center(const Index3& idx) const { return idx.cast<double>().matrix() * spacing(); }

  /// Nearest voxel to a physical point, wrapped onto the torus.
  Index3 nearest_voxel(const Point& x) const;

  /// Signed minimum-image displacement b - a on the torus.
  Point displacement(const Point& a, const Point& b) const;

  /// Integer wavenumber of index i along one axis ([0, n/2] then negatives).
  int mode(int i) const noexcept { return i <= n_ / 2 ? i : i - n_; }
  double wavenumber(int i) const noexcept { return 2.0 * std::numbers::pi / box_len_ * mode(i); }

  bool operator==(const Grid3& other) const noexcept {
    return n_ == other.n_ && box_len_ == other.box_len_;
  }

 private:
  int n_;
  double box_len_;
};

template <typename Scalar>
class BasicScalarField {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  explicit BasicScalarField(const Grid3& grid) : grid_(grid), data_(Array::Zero(grid.size())) {}
  BasicScalarField(const Grid3& grid, Array data) : grid_(grid), data_(std::move(data)) {
    if (data_.size() != grid_.size()) throw RangeError("scalar field size does not match grid");
  }

  const Grid3& grid() const noexcept { return grid_; }
  const Array& data() const noexcept { return data_; }
  Array& data() noexcept { return data_; }

  Scalar operator()(int i, int j, int k) const { return data_[grid_.flat(i, j, k)]; }
  Scalar& operator()(int i, int j, int k) { return data_[grid_.flat(i, j, k)]; }

 private:
  Grid3 grid_;
  Array data_;
};

/// Three components stored component-major: column c holds component c.
template <typename Scalar>
class BasicVectorField {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 3>;

  explicit BasicVectorField(const Grid3& grid) : grid_(grid), data_(Array::Zero(grid.size(), 3)) {}
  BasicVectorField(const Grid3& grid, Array data) : grid_(grid), data_(std::move(data)) {
    if (data_.rows() != grid_.size()) throw RangeError("vector field size does not match grid");
  }

  const Grid3& grid() const noexcept { return grid_; }
  const Array& data() const noexcept { return data_; }
  Array& data() noexcept { return data_; }

  auto component(int c) const { return data_.col(c); }
  auto component(int c) { return data_.col(c); }

  BasicScalarField<Scalar> component_field(int c) const {
    return BasicScalarField<Scalar>(grid_, data_.col(c));
  }
  void set_component(int c, const BasicScalarField<Scalar>& s) { data_.col(c) = s.data(); }

  /// Pointwise Euclidean magnitude.
  BasicScalarField<Scalar> magnitude() const {
    return BasicScalarField<Scalar>(grid_, data_.square().rowwise().sum().sqrt());
  }

  BasicVectorField& operator*=(Scalar c) {
    data_ *= c;
    return *this;
  }
  friend BasicVectorField operator*(Scalar c, BasicVectorField f) { return f *= c; }
  friend BasicVectorField operator+(BasicVectorField a, const BasicVectorField& b) {
    a.data_ += b.data_;
    return a;
  }

 private:
  Grid3 grid_;
  Array data_;
};

using ScalarField = BasicScalarField<double>;
using VectorField = BasicVectorField<double>;

template <typename Derived>
bool all_finite(const Eigen::ArrayBase<Derived>& a) {
  return a.isFinite().all();
}

/// Max over voxels of the pointwise Euclidean magnitude.
template <typename Scalar>
Scalar sup_norm(const BasicVectorField<Scalar>& f) {
  if (f.data().rows() == 0) return Scalar(0);
  return std::sqrt(f.data().square().rowwise().sum().maxCoeff());
}

/// Riemann-sum L^p norm of the magnitude over the whole torus.
template <typename Scalar>
Scalar lp_norm(const BasicVectorField<Scalar>& f, double p) {
  const auto mag = f.data().square().rowwise().sum().sqrt();
  if (std::isinf(p)) return mag.maxCoeff();
  return std::pow(mag.pow(p).sum() * f.grid().voxel_volume(), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Spectral operators. All derivatives drop the Nyquist plane.

SpectralArray forward_transform(const ScalarField& f);
ScalarField inverse_transform(const Grid3& grid, const SpectralArray& spectrum);

/// Curl computed in Fourier space.
VectorField curl(const VectorField& f);

/// Spectral divergence.
ScalarField divergence(const VectorField& f);

VectorField gradient(const ScalarField& g);

/// Projects onto divergence-free fields and removes the mean mode.
VectorField leray_project(const VectorField& f);

/// Periodic Biot-Savart inversion: returns u with curl u = omega, div u = 0 and
/// zero mean, using u_hat = i k x omega_hat / |k|^2.
VectorField biot_savart(const VectorField& omega);

// ---------------------------------------------------------------------------
// Ball kernels.

/// Membership rule shared by every ball computation: an integer voxel offset
/// lies in the closed ball when its center is within distance r.
inline bool in_ball(int di, int dj, int dk, double radius, double spacing) {
  const double lim = (radius / spacing) * (radius / spacing);
  return static_cast<double>(di * di + dj * dj + dk * dk) <= lim;
}

/// Indicator of the periodic closed ball B_r(0) together with its spectrum.
class BallKernel {
 public:
  BallKernel(const Grid3& grid, double radius);

  double radius() const noexcept { return radius_; }
  const Grid3& grid() const noexcept { return grid_; }
  const ScalarField& mask() const noexcept { return mask_; }
  std::int64_t voxel_count() const noexcept { return voxel_count_; }

  /// voxel_count * h^3.
  double discrete_volume() const noexcept { return voxel_count_ * grid_.voxel_volume(); }
  /// |discrete_volume - (4 pi / 3) r^3| / ((4 pi / 3) r^3).
  double volume_error() const noexcept;

  const SpectralArray& spectrum() const noexcept { return spectrum_; }

 private:
  Grid3 grid_;
  double radius_;
  ScalarField mask_;
  std::int64_t voxel_count_ = 0;
  SpectralArray spectrum_;
};

/// Shared kernel lookup with a bounded cache keyed by (n, L, r).
std::shared_ptr<const BallKernel> ball_kernel(const Grid3& grid, double radius);

/// For every voxel x, the sum of density over the voxels of B_r(x), computed
/// as a circular convolution with the ball indicator. No volume factor.
ScalarField ball_sums(const ScalarField& density, double radius);

/// x -> (int_{B_r(x)} |f|^p dy)^{1/p} at every voxel, by FFT convolution.
ScalarField sliding_ball_lp(const VectorField& f, double p, double radius);

/// sliding_ball_lp at several radii sharing one forward transform of |f|^p.
class SlidingBallLp {
 public:
  SlidingBallLp(const VectorField& f, double p);
  ScalarField operator()(double radius) const;

 private:
  Grid3 grid_;
  double p_;
  SpectralArray density_;
};

/// Same quantity at a single voxel by a direct loop over the periodic ball.
double ball_lp_bruteforce(const VectorField& f, double p, const Index3& x, double radius);

// ---------------------------------------------------------------------------
// Field files.

void save_field(const VectorField& f, const std::string& path);
void save_field(const ScalarField& f, const std::string& path);
VectorField load_field(const std::string& path);
ScalarField load_scalar_field(const std::string& path);

}  // namespace msparse
