#include "msparse/preduality.hpp"

#include <algorithm>
#include <random>

#include "msparse/fields.hpp"
#include "msparse/parallel.hpp"

namespace msparse {

namespace {

/// int_a^b s^{-q} ds for 0 <= a <= b.
double power_integral(double a, double b, double q) {
  if (!(b > a)) return 0.0;
  if (a == 0.0 && q >= 1.0) return kInfinity;
  if (q == 1.0) return std::log(b / a);
  if (a == 0.0) return std::pow(b, 1.0 - q) / (1.0 - q);
  // b^{1-q} - a^{1-q} = b^{1-q} (1 - (a/b)^{1-q})
  return -std::pow(b, 1.0 - q) * std::expm1((1.0 - q) * std::log(a / b)) / (1.0 - q);
}

/// int_t^inf w^theta for finite theta.
double tail_integral(const WeightSpec& w, double t) {
  const double lo = std::max(t, w.rho);
  if (lo >= 1.0) return 0.0;
  return power_integral(lo, 1.0, w.nu * w.theta);
}

/// ||w||^{-theta'}_{L^theta(t, inf)} on (rho, 1); infinite from t = 1.
double stieltjes_potential(const WeightSpec& w, double t) {
  if (t >= 1.0) return kInfinity;
  if (std::isinf(w.theta)) return std::pow(std::max(t, w.rho), w.nu);
  return std::pow(tail_integral(w, t), -1.0 / (w.theta - 1.0));
}

/// Stieltjes sum for a fixed center; theta = inf is allowed here.
double stieltjes_sum(const VectorField& f, double p, const WeightSpec& w, const Index3& x) {
  const Grid3& g = f.grid();
  const double q = conjugate_exponent(p);
  const double theta_c = conjugate_exponent(w.theta);
  const Point c = g.center(x);

  struct Entry {
    double d;
    double a;
  };
  std::vector<Entry> entries;
  for (Eigen::Index v = 0; v < g.size(); ++v) {
    const double m = std::sqrt(f.data().row(v).square().sum());
    if (m == 0.0) continue;
    const double d = g.displacement(c, g.center(g.unflat(v))).norm();
    if (d >= 1.0) return kInfinity;
    if (d <= w.rho) continue;
    entries.push_back({d, std::isinf(q) ? m : std::pow(m, q)});
  }
  if (entries.empty()) return 0.0;
  std::sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) { return l.d < r.d; });

  // suffix[k]: |f|^{p'} mass (or max |f|) of entries k.. beyond the current radius
  std::vector<double> suffix(entries.size() + 1, 0.0);
  for (std::size_t k = entries.size(); k-- > 0;) {
    suffix[k] = std::isinf(q) ? std::max(suffix[k + 1], entries[k].a) : suffix[k + 1] + entries[k].a;
  }
  const double vol = g.voxel_volume();
  auto complement_power = [&](std::size_t k) {
    if (std::isinf(q)) return std::pow(suffix[k], theta_c);
    return std::pow(suffix[k] * vol, theta_c / q);
  };

  double total = 0.0;
  double t0 = w.rho;
  double phi0 = stieltjes_potential(w, t0);
  std::size_t k = 0;
  while (k < entries.size()) {
    const double e = entries[k].d;
    const double phi = stieltjes_potential(w, e);
    total += complement_power(k) * (phi - phi0);
    while (k < entries.size() && entries[k].d == e) ++k;
    t0 = e;
    phi0 = phi;
  }
  return total;
}

}  // namespace

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw RangeError("exponent must be >= 1");
  if (p == 1.0) return kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double weight_tail_norm(const WeightSpec& w, double t) {
  w.validate();
  if (!(t > 0.0)) throw RangeError("tail norm needs t > 0");
  if (t >= 1.0) return 0.0;
  if (std::isinf(w.theta)) return std::pow(std::max(t, w.rho), -w.nu);
  return std::pow(tail_integral(w, t), 1.0 / w.theta);
}

double weight_total_norm(const WeightSpec& w) {
  w.validate();
  if (w.rho > 0.0) return weight_tail_norm(w, w.rho);
  if (std::isinf(w.theta)) return w.nu == 0.0 ? 1.0 : kInfinity;
  return std::pow(tail_integral(w, 0.0), 1.0 / w.theta);
}

double dual_weight(const WeightSpec& w, double t, DualVariant variant) {
  w.validate();
  if (std::isinf(w.theta)) throw RangeError("dual weight needs finite theta");
  if (!(t > 0.0)) throw DomainError("dual weight needs t > 0");
  const double q = w.nu * w.theta;
  if (variant == DualVariant::Tail) {
    if (t >= 1.0) throw DomainError("tail integral of the weight vanishes for t >= 1");
    const double wt = w(t);
    if (wt == 0.0) return 0.0;
    return std::pow(wt, w.theta - 1.0) / tail_integral(w, t);
  }
  if (t <= w.rho) throw DomainError("head integral of the weight vanishes for t <= rho");
  const double wt = w(t);
  if (wt == 0.0) return 0.0;
  const double head = power_integral(w.rho, std::min(t, 1.0), q);
  return std::pow(wt, w.theta - 1.0) / head;
}

double stieltjes_predual_integral(const VectorField& f, double p, const WeightSpec& w, const Index3& x) {
  w.validate();
  if (std::isinf(w.theta)) throw RangeError("the Stieltjes form needs finite theta");
  return stieltjes_sum(f, p, w, x);
}

std::vector<Index3> default_candidates(const VectorField& f) {
  const Grid3& g = f.grid();
  const Eigen::ArrayXd mag = f.data().square().rowwise().sum().sqrt();
  const double mass = mag.sum();
  if (mass == 0.0) return {Index3::Zero()};
  // circular mean per axis handles supports that straddle the periodic seam
  Point centroid;
  for (int a = 0; a < 3; ++a) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index v = 0; v < g.size(); ++v) {
      if (mag[v] == 0.0) continue;
      const double angle = 2.0 * std::numbers::pi * g.unflat(v)[a] / g.n();
      acc += mag[v] * std::polar(1.0, angle);
    }
    double angle = std::arg(acc);
    if (angle < 0.0) angle += 2.0 * std::numbers::pi;
    centroid[a] = angle / (2.0 * std::numbers::pi) * g.box_len();
  }
  const Index3 base = g.nearest_voxel(centroid);
  std::vector<Index3> out{base};
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      for (int k = -1; k <= 1; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        out.push_back(g.unflat(g.flat(base + Index3(i, j, k))));
      }
    }
  }
  return out;
}

PredualBound predual_bound(const VectorField& f, double p, const WeightSpec& w, std::vector<Index3> candidates) {
  w.validate();
  const double total = weight_total_norm(w);
  if (!(total > 0.0)) throw DomainError("weight has zero total norm");
  if (candidates.empty()) candidates = default_candidates(f);

  std::vector<double> sums(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t i) { sums[i] = stieltjes_sum(f, p, w, candidates[i]); });
  const auto best = std::min_element(sums.begin(), sums.end()) - sums.begin();

  PredualBound out;
  out.center = candidates[best];
  out.stieltjes_term = std::pow(sums[best], 1.0 / conjugate_exponent(w.theta));
  out.global_term = std::isinf(total) ? 0.0 : lp_norm(f, conjugate_exponent(p)) / total;
  out.value = out.stieltjes_term + out.global_term;
  return out;
}

double pairing_integral(const VectorField& f, const VectorField& g) {
  if (!(f.grid() == g.grid())) throw RangeError("fields live on different grids");
  const Eigen::ArrayXd a = f.data().square().rowwise().sum().sqrt();
  const Eigen::ArrayXd b = g.data().square().rowwise().sum().sqrt();
  return (a * b).sum() * f.grid().voxel_volume();
}

std::pair<VectorField, VectorField> holder_sample(const Grid3& grid, std::uint64_t seed) {
  constexpr double kRadius = 0.6;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> idx(0, grid.n() - 1);
  const Point center = grid.center(Index3(idx(rng), idx(rng), idx(rng)));
  VectorField f = random_band_limited_field(grid, grid.n() / 4.0, 2 * seed + 1);
  for (Eigen::Index v = 0; v < grid.size(); ++v) {
    const double s = grid.displacement(center, grid.center(grid.unflat(v))).norm() / kRadius;
    const double cut = s < 1.0 ? (1.0 - s * s) * (1.0 - s * s) : 0.0;
    f.data().row(v) *= cut;
  }
  VectorField g = random_band_limited_field(grid, grid.n() / 4.0, 2 * seed + 2);
  return {std::move(f), std::move(g)};
}

std::vector<WeightSpec> holder_weights() { return {{1.0, 0.1, 2.0}, {1.0, 0.1, kInfinity}}; }

}  // namespace msparse
