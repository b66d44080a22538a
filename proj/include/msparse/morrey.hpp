#pragma once

#include <limits>
#include <vector>

#include "msparse/grid.hpp"

namespace msparse {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Truncated power weight w(s) = s^{-nu} on [rho, 1], zero elsewhere, measured
/// in L^theta(0, inf).
struct WeightSpec {
  double nu = 0.0;
  double rho = 0.0;
  double theta = kInfinity;

  /// Throws RangeError unless nu >= 0, 0 <= rho < 1 and theta in (1, inf].
  void validate() const;

  double operator()(double s) const noexcept;

  /// Finite theta with nu * theta == 1: tail integrals are logarithmic.
  bool log_edge() const noexcept { return std::isfinite(theta) && nu * theta == 1.0; }
};

/// Lebesgue exponent, weight and the radii used as quadrature nodes.
struct MorreyParams {
  double p = 2.0;
  WeightSpec weight;
  std::vector<double> scales;

  /// Throws RangeError on invalid exponents, an empty or non-increasing scale
  /// list, nodes outside (spacing, 1], or fewer than two nodes when theta is
  /// finite.
  void validate(const Grid3& grid) const;
};

/// count log-spaced radii from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, int count);

/// Default nodes: 32 log-spaced radii on [max(rho, 2 * spacing), 1].
std::vector<double> default_scales(const Grid3& grid, const WeightSpec& weight, int count = 32);

/// Every radius at which the voxelized ball B_r gains voxels inside
/// (r_min, r_max], preceded by r_min. The voxelized ball is constant between
/// consecutive entries, so a supremum of r^{-a} * F(B_r) with a >= 0 and F
/// monotone in the ball is attained on this list.
std::vector<double> shell_scales(const Grid3& grid, double r_min, double r_max);

/// Per-node weights of the scale integral: log-trapezoid in ln r for finite
/// theta, all ones for theta = inf.
std::vector<double> scale_quadrature_weights(const MorreyParams& params);

/// Norm value with the witnessing center and radius. For finite theta the
/// radius is the node with the largest weighted integrand.
struct NormResult {
  double value = 0.0;
  Index3 argmax_center = Index3::Zero();
  double argmax_r = 0.0;
};

/// || w(r) ||f||_{L^p(B_r(center))} ||_{L^theta}, scale integral by the
/// log-trapezoid rule over params.scales. Ball norms use the direct loop.
double lm_norm(const VectorField& f, const MorreyParams& params, const Index3& center);

/// Supremum of lm_norm over all voxel centers, one sliding-ball pass per
/// scale.
NormResult gm_norm(const VectorField& f, const MorreyParams& params);

/// As lm_norm with the L^p norm taken over the torus minus B_r(center).
double clm_norm(const VectorField& f, const MorreyParams& params, const Index3& center);

/// sup over centers x and radii r in [r_min, r_max] of r^{-alpha} int_{B_r(x)} |f|^p.
/// nodes == 0 scans shell_scales(r_min, r_max), which is exact for the
/// voxelized balls; nodes > 0 uses that many log-spaced radii instead.
NormResult classical_morrey(const VectorField& f, double p, double alpha, double r_min, double r_max,
                            int nodes = 0);

}  // namespace msparse
