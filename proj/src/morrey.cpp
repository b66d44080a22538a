#include "msparse/morrey.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "msparse/parallel.hpp"

namespace msparse {

void WeightSpec::validate() const {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw RangeError("weight exponent nu must be finite and >= 0");
  if (!(rho >= 0.0) || !(rho < 1.0)) throw RangeError("weight cutoff rho must lie in [0, 1)");
  if (!(theta > 1.0)) throw RangeError("theta must lie in (1, inf]");
}

double WeightSpec::operator()(double s) const noexcept {
  if (s < rho || s > 1.0 || s <= 0.0) return 0.0;
  return nu == 0.0 ? 1.0 : std::pow(s, -nu);
}

void MorreyParams::validate(const Grid3& grid) const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw RangeError("exponent p must be finite and >= 1");
  weight.validate();
  if (scales.empty()) throw RangeError("scale list is empty");
  if (std::isfinite(weight.theta) && scales.size() < 2) {
    throw RangeError("finite theta needs at least two scale nodes");
  }
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > grid.spacing()) || !(scales[i] <= 1.0)) {
      throw RangeError("scale nodes must lie in (spacing, 1]");
    }
    if (i > 0 && !(scales[i] > scales[i - 1])) throw RangeError("scale nodes must be strictly increasing");
  }
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw RangeError("invalid log-spaced range");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> default_scales(const Grid3& grid, const WeightSpec& weight, int count) {
  const double lo = std::max(weight.rho, 2.0 * grid.spacing());
  if (!(lo < 1.0)) throw RangeError("grid too coarse for the weight support");
  return log_spaced(lo, 1.0, count);
}

std::vector<double> shell_scales(const Grid3& grid, double r_min, double r_max) {
  if (!(r_min > 0.0) || !(r_min < r_max) || !(r_max < grid.box_len() / 2.0)) {
    throw RangeError("shell range must satisfy 0 < r_min < r_max < box_len/2");
  }
  const double h = grid.spacing();
  const double lo = (r_min / h) * (r_min / h);
  const double hi = (r_max / h) * (r_max / h);
  const int reach = static_cast<int>(std::ceil(r_max / h));
  std::set<long> squares;
  for (int a = 0; a <= reach; ++a) {
    for (int b = 0; b <= a; ++b) {
      for (int c = 0; c <= b; ++c) {
        const long m = static_cast<long>(a) * a + static_cast<long>(b) * b + static_cast<long>(c) * c;
        if (m > lo && m <= hi) squares.insert(m);
      }
    }
  }
  std::vector<double> out{r_min};
  for (long m : squares) {
    double r = std::sqrt(static_cast<double>(m)) * h;
    while ((r / h) * (r / h) < static_cast<double>(m)) r = std::nextafter(r, kInfinity);
    if (r > r_max) r = r_max;
    if (r > out.back()) out.push_back(r);
  }
  return out;
}

namespace {

/// Log-trapezoid weights: int G dr = int G(e^t) e^t dt by the trapezoid rule in t.
std::vector<double> log_trapezoid_weights(const std::vector<double>& r) {
  const std::size_t m = r.size();
  std::vector<double> c(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double dt = 0.5 * (std::log(r[i + 1]) - std::log(r[i]));
    c[i] += dt * r[i];
    c[i + 1] += dt * r[i + 1];
  }
  return c;
}

/// Running L^theta combination of nonnegative terms g_i with quadrature
/// weights c_i, kept as max * (sum c_i (g_i / max)^theta) to avoid overflow.
struct ThetaAccumulator {
  double theta;
  double peak = 0.0;
  double sum = 0.0;

  void add(double g, double c) {
    if (!(g > 0.0)) return;
    if (std::isinf(theta)) {
      peak = std::max(peak, g);
    } else if (g > peak) {
      sum = (peak > 0.0 ? sum * std::pow(peak / g, theta) : 0.0) + c;
      peak = g;
    } else {
      sum += c * std::pow(g / peak, theta);
    }
  }

  double value() const {
    if (std::isinf(theta) || peak == 0.0) return peak;
    return peak * std::pow(sum, 1.0 / theta);
  }
};

std::vector<double> quadrature_weights(const MorreyParams& params) {
  if (std::isinf(params.weight.theta)) return std::vector<double>(params.scales.size(), 1.0);
  return log_trapezoid_weights(params.scales);
}

/// Evaluates make(i) for every i in [0, count) in parallel batches and feeds
/// the results to fold(i, value) in index order.
template <typename Make, typename Fold>
void ordered_batches(std::size_t count, Make&& make, Fold&& fold) {
  const std::size_t batch = static_cast<std::size_t>(std::max(1, thread_count()));
  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t len = std::min(batch, count - start);
    std::vector<std::optional<ScalarField>> slots(len);
    parallel_for(len, [&](std::size_t k) { slots[k].emplace(make(start + k)); });
    for (std::size_t k = 0; k < len; ++k) fold(start + k, *slots[k]);
  }
}

/// Minimum-image squared integer offset of every voxel from center.
Eigen::ArrayXd squared_offsets(const Grid3& g, const Index3& center) {
  Eigen::ArrayXd d2(g.size());
  const int n = g.n();
  for (Eigen::Index f = 0; f < g.size(); ++f) {
    const Index3 idx = g.unflat(f);
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
      int d = g.wrap(idx[a] - center[a]);
      if (d > n / 2) d -= n;
      s += static_cast<double>(d) * d;
    }
    d2[f] = s;
  }
  return d2;
}

Eigen::ArrayXd pointwise_power(const VectorField& f, double p) {
  const Eigen::ArrayXd sq = f.data().square().rowwise().sum();
  return p == 2.0 ? sq : Eigen::ArrayXd(sq.pow(p / 2.0));
}

}  // namespace

std::vector<double> scale_quadrature_weights(const MorreyParams& params) { return quadrature_weights(params); }

double lm_norm(const VectorField& f, const MorreyParams& params, const Index3& center) {
  params.validate(f.grid());
  const auto c = quadrature_weights(params);
  ThetaAccumulator acc{params.weight.theta};
  for (std::size_t i = 0; i < params.scales.size(); ++i) {
    const double r = params.scales[i];
    const double w = params.weight(r);
    if (w == 0.0) continue;
    acc.add(w * ball_lp_bruteforce(f, params.p, center, r), c[i]);
  }
  return acc.value();
}

double clm_norm(const VectorField& f, const MorreyParams& params, const Index3& center) {
  const Grid3& g = f.grid();
  params.validate(g);
  const auto c = quadrature_weights(params);
  const Eigen::ArrayXd d2 = squared_offsets(g, center);
  const Eigen::ArrayXd density = pointwise_power(f, params.p);
  const double h = g.spacing();
  ThetaAccumulator acc{params.weight.theta};
  for (std::size_t i = 0; i < params.scales.size(); ++i) {
    const double r = params.scales[i];
    const double w = params.weight(r);
    if (w == 0.0) continue;
    const double lim = (r / h) * (r / h);
    const double outside = (d2 > lim).select(density, 0.0).sum() * g.voxel_volume();
    acc.add(w * std::pow(outside, 1.0 / params.p), c[i]);
  }
  return acc.value();
}

NormResult gm_norm(const VectorField& f, const MorreyParams& params) {
  const Grid3& g = f.grid();
  params.validate(g);
  const auto c = quadrature_weights(params);
  const double theta = params.weight.theta;
  const Eigen::Index size = g.size();

  std::vector<ThetaAccumulator> acc(size, ThetaAccumulator{theta});
  const SlidingBallLp sliding(f, params.p);
  Eigen::ArrayXi best_node = Eigen::ArrayXi::Constant(size, -1);

  ordered_batches(
      params.scales.size(),
      [&](std::size_t i) {
        const double r = params.scales[i];
        const double w = params.weight(r);
        if (w == 0.0) return ScalarField(g);
        ScalarField s = sliding(r);
        s.data() *= w;
        return s;
      },
      [&](std::size_t i, const ScalarField& s) {
        for (Eigen::Index x = 0; x < size; ++x) {
          const double v = s.data()[x];
          if (v > acc[x].peak) best_node[x] = static_cast<int>(i);
          acc[x].add(v, c[i]);
        }
      });

  Eigen::ArrayXd value(size);
  for (Eigen::Index x = 0; x < size; ++x) value[x] = acc[x].value();

  NormResult out;
  Eigen::Index arg = 0;
  out.value = value.maxCoeff(&arg);
  out.argmax_center = g.unflat(arg);
  out.argmax_r = best_node[arg] >= 0 ? params.scales[best_node[arg]] : params.scales.back();
  return out;
}

NormResult classical_morrey(const VectorField& f, double p, double alpha, double r_min, double r_max,
                            int nodes) {
  const Grid3& g = f.grid();
  if (!(p >= 1.0) || !std::isfinite(p)) throw RangeError("exponent p must be finite and >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw RangeError("alpha must be finite and >= 0");
  if (!(r_min > 0.0) || !(r_min < r_max) || !(r_max <= 1.0)) {
    throw RangeError("scale range must satisfy 0 < r_min < r_max <= 1");
  }
  if (nodes < 0 || nodes == 1) throw RangeError("node count must be 0 or at least 2");
  const std::vector<double> radii = nodes == 0 ? shell_scales(g, r_min, r_max) : log_spaced(r_min, r_max, nodes);

  const SpectralArray density = forward_transform(ScalarField(g, pointwise_power(f, p)));
  const double vol = g.voxel_volume();

  NormResult out;
  out.argmax_r = radii.front();
  bool first = true;
  ordered_batches(
      radii.size(),
      [&](std::size_t i) {
        const auto kernel = ball_kernel(g, radii[i]);
        return inverse_transform(g, density * kernel->spectrum());
      },
      [&](std::size_t i, const ScalarField& sums) {
        Eigen::Index arg = 0;
        const double best = sums.data().maxCoeff(&arg);
        const double value = std::pow(radii[i], -alpha) * std::max(best, 0.0) * vol;
        if (first || value > out.value) {
          out.value = value;
          out.argmax_center = g.unflat(arg);
          out.argmax_r = radii[i];
          first = false;
        }
      });
  return out;
}

}  // namespace msparse
