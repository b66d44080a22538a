#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "msparse/morrey.hpp"

namespace msparse {

/// Hoelder conjugate p / (p - 1); infinite for p = 1.
double conjugate_exponent(double p);

/// ||w||_{L^theta(t, inf)} for t > 0. Constant on (0, rho], zero from t = 1.
double weight_tail_norm(const WeightSpec& w, double t);

/// ||w||_{L^theta(0, inf)}; infinite when the weight is not integrable at 0.
double weight_total_norm(const WeightSpec& w);

enum class DualVariant {
  Tail,  ///< w^{theta-1}(t) / int_t^inf w^theta
  Head,  ///< w^{theta-1}(t) / int_0^t w^theta
};

/// Dual weight for finite theta. DomainError where the denominator vanishes.
double dual_weight(const WeightSpec& w, double t, DualVariant variant = DualVariant::Tail);

/// int_0^1 ||f||^{theta'}_{L^{p'}(T \ B_t(x))} d(||w||^{-theta'}_{L^theta(t, inf)}) for
/// finite theta, where T is the torus. The derivative vanishes on (0, rho] and
/// past t = 1.
///
/// The complement norm is a step function of t on the grid, so the integral
/// is summed exactly interval by interval. Mass at distance >= 1 from x makes
/// the integral diverge at the upper end and yields +inf.
double stieltjes_predual_integral(const VectorField& f, double p, const WeightSpec& w, const Index3& x);

struct PredualBound {
  double value = 0.0;
  double stieltjes_term = 0.0;  ///< (inf over candidates)^{1/theta'}
  double global_term = 0.0;     ///< ||f||_{L^{p'}} / ||w||_{L^theta(0, inf)}
  Index3 center = Index3::Zero();
};

/// Periodic |f|-weighted centroid voxel and its 26 neighbours. A zero field
/// yields the origin alone.
std::vector<Index3> default_candidates(const VectorField& f);

/// Sum of the Stieltjes term minimized over candidate centers and the global
/// term. theta = inf uses d(t^nu) on (rho, 1) as the Stieltjes measure.
/// An empty candidate list selects default_candidates(f).
PredualBound predual_bound(const VectorField& f, double p, const WeightSpec& w,
                           std::vector<Index3> candidates = {});

/// int_T |f| |g| over the torus.
double pairing_integral(const VectorField& f, const VectorField& g);

/// Seeded test pair for the Hoelder bound: f is a random band-limited field
/// cut off smoothly outside a ball of radius 0.6 around a random voxel, g is a
/// random band-limited field.
std::pair<VectorField, VectorField> holder_sample(const Grid3& grid, std::uint64_t seed);

/// Configurations covered by kHolderConstant: p = 2, nu = 1, rho = 0.1 and
/// theta in {2, inf}, with default scale nodes for the gm norm.
std::vector<WeightSpec> holder_weights();

/// Largest ratio pairing_integral / (predual_bound * gm_norm) observed on
/// holder_sample seeds 1..2000 at n = 32 over holder_weights(), rounded up in
/// the third digit. Reproduced by msparse_calibrate.
inline constexpr double kHolderConstant = 1.08;

}  // namespace msparse
