#include "msparse/sparseness.hpp"

#include <algorithm>
#include <limits>

#include "msparse/parallel.hpp"

namespace msparse {

VoxelSet::VoxelSet(const Grid3& grid, Mask mask) : grid_(grid), mask_(std::move(mask)) {
  if (mask_.size() != grid_.size()) throw RangeError("mask size does not match grid");
}

std::string level_set_name(int index) {
  if (index < 0 || index > 5) throw RangeError("level set index must lie in [0, 6)");
  return "S_" + std::to_string(index / 2 + 1) + (index % 2 == 0 ? "+" : "-");
}

std::array<VoxelSet, 6> superlevel_sets(const VectorField& f, double lambda) {
  if (!(lambda > 0.0) || !(lambda < 1.0)) throw RangeError("lambda must lie in (0, 1)");
  const double sup = sup_norm(f);
  if (sup == 0.0) throw DomainError("super-level sets of the zero field are undefined");
  const double level = lambda * sup;
  const Grid3& g = f.grid();
  std::array<VoxelSet, 6> out{VoxelSet(g), VoxelSet(g), VoxelSet(g), VoxelSet(g), VoxelSet(g), VoxelSet(g)};
  for (int i = 0; i < 3; ++i) {
    out[level_set_index(i, true)].mask() = f.component(i) > level;
    out[level_set_index(i, false)].mask() = -f.component(i) > level;
  }
  return out;
}

double sparse_3d(const VoxelSet& set, const Index3& x0, double radius) {
  const Grid3& g = set.grid();
  const auto kernel = ball_kernel(g, radius);
  const double h = g.spacing();
  const int reach = static_cast<int>(std::ceil(radius / h)) + 1;
  std::int64_t inside = 0;
  for (int di = -reach; di <= reach; ++di) {
    for (int dj = -reach; dj <= reach; ++dj) {
      for (int dk = -reach; dk <= reach; ++dk) {
        if (in_ball(di, dj, dk, radius, h) && set.contains(x0 + Index3(di, dj, dk))) ++inside;
      }
    }
  }
  return static_cast<double>(inside) / static_cast<double>(kernel->voxel_count());
}

Eigen::ArrayXi ball_counts(const VoxelSet& set, double radius) {
  const ScalarField sums = ball_sums(ScalarField(set.grid(), set.mask().cast<double>()), radius);
  return sums.data().round().cast<int>();
}

SemiMixedResult semi_mixed(const VoxelSet& set, double radius, double delta) {
  const auto kernel = ball_kernel(set.grid(), radius);
  SemiMixedResult out;
  if (set.count() == 0) return out;
  const Eigen::ArrayXi counts = ball_counts(set, radius);
  Eigen::Index arg = 0;
  const int best = counts.maxCoeff(&arg);
  out.max_density = static_cast<double>(best) / static_cast<double>(kernel->voxel_count());
  out.witness = set.grid().unflat(arg);
  out.ok = out.max_density <= delta;
  return out;
}

std::vector<Eigen::Vector3d> fibonacci_directions(int count) {
  if (count < 2) throw RangeError("need at least two directions");
  std::vector<Eigen::Vector3d> out(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double rad = std::sqrt(1.0 - z * z);
    out[i] = Eigen::Vector3d(rad * std::cos(golden * i), rad * std::sin(golden * i), z);
  }
  return out;
}

namespace {

double trilinear(const VoxelSet& set, const Point& x) {
  const Grid3& g = set.grid();
  const Eigen::Array3d s = x.array() / g.spacing();
  const Eigen::Array3d base = s.floor();
  const Eigen::Array3d frac = s - base;
  const Index3 b = base.cast<int>();
  double acc = 0.0;
  for (int corner = 0; corner < 8; ++corner) {
    double weight = 1.0;
    Index3 idx = b;
    for (int a = 0; a < 3; ++a) {
      const bool upper = (corner >> a) & 1;
      weight *= upper ? frac[a] : 1.0 - frac[a];
      idx[a] += upper ? 1 : 0;
    }
    if (weight > 0.0 && set.contains(idx)) acc += weight;
  }
  return acc;
}

}  // namespace

Sparse1dResult sparse_1d(const VoxelSet& set, const Point& x0, double radius, int ndir) {
  if (!(radius > 0.0)) throw RangeError("segment half-length must be positive");
  const auto dirs = fibonacci_directions(ndir);
  const double step = 0.5 * set.grid().spacing();
  const int samples = std::max(2, static_cast<int>(std::ceil(2.0 * radius / step)));
  Sparse1dResult out;
  out.best_ratio = std::numeric_limits<double>::infinity();
  for (const auto& v : dirs) {
    int inside = 0;
    for (int s = 0; s < samples; ++s) {
      const double t = -radius + (s + 0.5) * (2.0 * radius / samples);
      if (trilinear(set, x0 + t * v) >= 0.5) ++inside;
    }
    const double ratio = static_cast<double>(inside) / samples;
    if (ratio < out.best_ratio) {
      out.best_ratio = ratio;
      out.best_dir = v;
    }
  }
  return out;
}

PairLD admissible_pair(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) throw RangeError("delta must lie in (0, 1)");
  const double d2 = delta * delta;
  PairLD pair;
  pair.delta = delta;
  pair.h = 2.0 / std::numbers::pi * std::asin((1.0 - d2) / (1.0 + d2));
  pair.lambda = (1.0 - pair.h) / (2.0 - pair.h);
  if (!(1.0 / (1.0 + pair.lambda) < delta)) {
    throw InadmissiblePairError("delta = " + std::to_string(delta) + " gives lambda = " +
                                std::to_string(pair.lambda) + " with 1/(1+lambda) >= delta");
  }
  return pair;
}

namespace {

void require_product(const PairLD& pair) {
  if (!(pair.product() > 1.0)) throw DomainError("delta (1 + lambda) must exceed 1");
}

}  // namespace

double kappa(const PairLD& pair) {
  require_product(pair);
  const double d = pair.product();
  return std::cbrt((d + 1.0) / (2.0 * d));
}

double cstar(const PairLD& pair, double cal) {
  require_product(pair);
  if (!(cal > 0.0)) throw RangeError("calibration constant must be positive");
  return cal * kUnitBallVolume * std::sqrt(1.0 - kappa(pair)) * (pair.product() - 1.0) / 2.0;
}

double eps_cal(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw RangeError("exponent p must be finite and >= 1");
  // varpi^{-1/p'} = varpi^{1/p - 1}
  return 2.0 / 3.0 * std::pow(kUnitBallVolume, 1.0 / p - 1.0);
}

double eps_eta(const PairLD& pair) {
  require_product(pair);
  return std::cbrt((pair.product() + 1.0) / 2.0) - 1.0;
}

double eps_const(const PairLD& pair, double p, double theta, double alpha) {
  require_product(pair);
  if (!(theta > 1.0)) throw RangeError("theta must lie in (1, inf]");
  if (!(alpha >= 0.0)) throw RangeError("alpha must be >= 0");
  if (std::isfinite(theta) && !(alpha * theta > 1.0)) throw RangeError("finite theta needs alpha theta > 1");
  const double x = (pair.product() - 1.0) / 2.0;
  const double eta = eps_eta(pair);
  const double expo = std::isinf(theta) ? -alpha : (1.0 - alpha * theta) / theta;
  // 1 - 1/p' = 1/p
  return eps_cal(p) * kUnitBallVolume * std::pow(x, 1.0 / p) * std::pow(1.0 + eta, expo) * eta;
}

SparseConstants sparse_constants(const PairLD& pair, double p, double theta, double alpha) {
  return {kappa(pair), cstar(pair), eps_const(pair, p, theta, alpha), kCal0};
}

ZAlphaResult z_alpha_member(const VectorField& f, double alpha, const PairLD& pair, double c0, int nscales) {
  const Grid3& g = f.grid();
  if (!(c0 > 1.0)) throw RangeError("c0 must exceed 1");
  if (!(alpha > 0.0)) throw RangeError("alpha must be positive");
  if (nscales < 1) throw RangeError("need at least one scale");
  const double sup = sup_norm(f);
  if (sup == 0.0) throw DomainError("membership of the zero field is undefined");

  ZAlphaResult out;
  const double base = std::pow(sup, -alpha);
  for (int k = 0; k < nscales; ++k) {
    // exponents (2k + 1) / nscales - 1 stay strictly inside (-1, 1)
    const double c = std::pow(c0, (2.0 * k + 1.0) / nscales - 1.0);
    const double r = base / c;
    if (r > g.spacing() && r < g.box_len() / 2.0) out.scales.push_back(r);
  }
  if (out.scales.empty()) throw RangeError("every membership scale falls outside (spacing, box_len/2)");

  // dominant level set per voxel under the max-component reading of |f(x0)|
  Eigen::ArrayXi dominant(g.size());
  for (Eigen::Index v = 0; v < g.size(); ++v) {
    int best = 0;
    double mag = std::abs(f.data()(v, 0));
    for (int j = 1; j < 3; ++j) {
      if (std::abs(f.data()(v, j)) > mag) {
        mag = std::abs(f.data()(v, j));
        best = j;
      }
    }
    dominant[v] = level_set_index(best, f.data()(v, best) >= 0.0);
  }

  const auto sets = superlevel_sets(f, pair.lambda);
  Eigen::Array<bool, Eigen::Dynamic, 1> passed = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(g.size(), false);
  for (double r : out.scales) {
    const double total = static_cast<double>(ball_kernel(g, r)->voxel_count());
    std::array<Eigen::ArrayXi, 6> counts;
    parallel_for(6, [&](std::size_t s) { counts[s] = ball_counts(sets[s], r); });
    for (Eigen::Index v = 0; v < g.size(); ++v) {
      if (!passed[v] && counts[dominant[v]][v] / total <= pair.delta) passed[v] = true;
    }
  }
  for (Eigen::Index v = 0; v < g.size(); ++v) {
    if (passed[v]) continue;
    ++out.failing;
    if (out.witnesses.size() < 10) out.witnesses.push_back(g.unflat(v));
  }
  out.ok = out.failing == 0;
  return out;
}

}  // namespace msparse
