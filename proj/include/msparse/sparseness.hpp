#pragma once

#include <array>
#include <string>
#include <vector>

#include "msparse/grid.hpp"

namespace msparse {

/// Boolean voxel mask on a grid.
class VoxelSet {
 public:
  using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

  explicit VoxelSet(const Grid3& grid) : grid_(grid), mask_(Mask::Constant(grid.size(), false)) {}
  VoxelSet(const Grid3& grid, Mask mask);

  const Grid3& grid() const noexcept { return grid_; }
  const Mask& mask() const noexcept { return mask_; }
  Mask& mask() noexcept { return mask_; }

  std::int64_t count() const { return mask_.count(); }
  double volume() const { return static_cast<double>(count()) * grid_.voxel_volume(); }
  bool contains(const Index3& idx) const { return mask_[grid_.flat(idx)]; }

 private:
  Grid3 grid_;
  Mask mask_;
};

/// Index of S^{i,+} is 2i, of S^{i,-} is 2i + 1.
constexpr int level_set_index(int component, bool positive) { return 2 * component + (positive ? 0 : 1); }

/// "S_1+", "S_1-", ..., "S_3-".
std::string level_set_name(int index);

/// The six sets {f_i^{+/-} > lambda ||f||_inf} (strict), ordered by
/// level_set_index. Throws DomainError for f = 0.
std::array<VoxelSet, 6> superlevel_sets(const VectorField& f, double lambda);

/// mu(S cap B_r(x0)) / mu(B_r(x0)) by voxel counting.
double sparse_3d(const VoxelSet& set, const Index3& x0, double radius);

struct SemiMixedResult {
  bool ok = true;
  double max_density = 0.0;
  Index3 witness = Index3::Zero();
};

/// Largest sparse_3d over all centers from one ball convolution of the mask.
SemiMixedResult semi_mixed(const VoxelSet& set, double radius, double delta);

/// Per-voxel exact counts of set voxels inside B_r(x).
Eigen::ArrayXi ball_counts(const VoxelSet& set, double radius);

/// count points of the Fibonacci lattice on the unit sphere.
std::vector<Eigen::Vector3d> fibonacci_directions(int count);

struct Sparse1dResult {
  double best_ratio = 0.0;
  Eigen::Vector3d best_dir = Eigen::Vector3d::UnitX();
};

/// Minimum over ndir directions of the fraction of the segment
/// (x0 - r v, x0 + r v) lying in the set. The segment is sampled every half
/// voxel; the mask is interpolated trilinearly and a sample counts as inside
/// when the interpolant is at least 1/2.
Sparse1dResult sparse_1d(const VoxelSet& set, const Point& x0, double radius, int ndir = 256);

/// Admissible (lambda, delta) pair with h = (2 / pi) asin((1 - delta^2) / (1 + delta^2)).
struct PairLD {
  double lambda = 0.0;
  double delta = 0.0;
  double h = 0.0;

  /// delta * (1 + lambda); the lemma constants need this above 1.
  double product() const noexcept { return delta * (1.0 + lambda); }
};

/// lambda = (1 - h) / (2 - h). Throws InadmissiblePairError unless
/// 1 / (1 + lambda) < delta.
PairLD admissible_pair(double delta);

/// cbrt((D + 1) / (2 D)) with D = delta (1 + lambda) > 1.
double kappa(const PairLD& pair);

/// Explicit constant of the smoothstep cutoff chain: the ramp
/// 1 - (3t^2 - 2t^3) over [kappa r, r] has ||grad phi||_2^2 <= 4.8 pi r / (1 - kappa).
inline const double kCal0 = 1.0 / std::sqrt(4.8 * std::numbers::pi);

/// cal * varpi * (1 - kappa)^{1/2} * (D - 1) / 2.
double cstar(const PairLD& pair, double cal = kCal0);

/// (2 / 3) varpi^{-1/p'}: the cutoff gradient bound 3 / (2 eta r) combined with
/// Hoelder on the cutoff shell.
double eps_cal(double p);

/// Growth factor eta of the cutoff in the Morrey lemma: (1 + eta)^3 = (D + 1) / 2.
double eps_eta(const PairLD& pair);

/// eps_cal(p) * varpi * X^{1 - 1/p'} * (1 + eta)^e * eta with X = (D - 1) / 2 and
/// e = (1 - alpha theta) / theta, or -alpha for theta = inf.
double eps_const(const PairLD& pair, double p, double theta, double alpha);

struct SparseConstants {
  double kappa = 0.0;
  double cstar = 0.0;
  double eps = 0.0;
  double cal = kCal0;
};

SparseConstants sparse_constants(const PairLD& pair, double p, double theta, double alpha);

struct ZAlphaResult {
  bool ok = true;
  std::int64_t failing = 0;
  std::vector<Index3> witnesses;  ///< first failing voxels, at most 10
  std::vector<double> scales;     ///< radii tested
};

/// Membership test: every voxel x0 must see its dominant level set (largest
/// |f_j(x0)|, ties to the smallest j then the positive part) delta-sparse at
/// one of the radii ||f||_inf^{-alpha} / c, c on nscales log-spaced points
/// strictly inside (1 / c0, c0). Radii outside (spacing, box_len / 2) are
/// dropped; RangeError if none remain.
ZAlphaResult z_alpha_member(const VectorField& f, double alpha, const PairLD& pair, double c0, int nscales = 9);

}  // namespace msparse
