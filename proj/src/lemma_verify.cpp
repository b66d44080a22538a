#include "msparse/lemma_verify.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "msparse/fields.hpp"
#include "msparse/preduality.hpp"

namespace msparse {

std::string to_string(LemmaMode mode) { return mode == LemmaMode::Curl ? "curl" : "identity"; }

LemmaMode parse_lemma_mode(const std::string& text) {
  if (text == "curl") return LemmaMode::Curl;
  if (text == "identity") return LemmaMode::Identity;
  throw RangeError("mode must be curl or identity, got '" + text + "'");
}

namespace {

void check_band(double band) {
  if (!(band >= 0.0) || !(band < 1.0)) throw RangeError("guard band must lie in [0, 1)");
}

void set_premise(VerifyReport& rep, double lhs, double rhs) {
  rep.premise_lhs = lhs;
  rep.premise_rhs = rhs;
  rep.premise_holds = lhs <= (1.0 - rep.band) * rhs;
  rep.marginal = !rep.premise_holds && lhs <= rhs;
}

/// Fills densities and conclusion_holds from the super-level sets of w.
void set_conclusion(VerifyReport& rep, const VectorField& w, double lambda, double delta, double radius) {
  const auto sets = superlevel_sets(w, lambda);
  rep.conclusion_holds = true;
  for (int s = 0; s < 6; ++s) {
    const SemiMixedResult res = semi_mixed(sets[s], radius, delta);
    rep.per_set_densities[s] = res.max_density;
    rep.conclusion_holds = rep.conclusion_holds && res.ok;
  }
}

void require_resolved(const Grid3& g, double radius, const char* what) {
  if (!(radius > g.spacing()) || !(radius < g.box_len() / 2.0)) {
    throw RangeError(std::string(what) + " must lie in (spacing, box_len / 2)");
  }
}

/// Sup norm below which a field counts as identically zero relative to f.
bool vanishes(double sup_w, const VectorField& f) {
  return sup_w <= 1e-13 * sup_norm(f) / f.grid().spacing();
}

}  // namespace

VerifyReport check_lemma_l2(const VectorField& f, const PairLD& pair, double r, double band) {
  check_band(band);
  if (!(r > 0.0) || !(r <= 1.0)) throw RangeError("r must lie in (0, 1]");
  const Grid3& g = f.grid();
  const double kr = kappa(pair) * r;
  require_resolved(g, r, "r");
  require_resolved(g, kr, "kappa r");

  VerifyReport rep;
  rep.band = band;
  rep.params = VerifyParams{"l2", pair.lambda, pair.delta, r, 2.0, kInfinity, 0.0, 0.0, LemmaMode::Curl};
  const VectorField w = curl(f);
  const double sup_w = sup_norm(w);
  if (sup_w == 0.0 || vanishes(sup_w, f)) {
    rep.degenerate = true;
    rep.premise_holds = true;
    return rep;
  }
  set_premise(rep, sliding_ball_lp(f, 2.0, r).data().maxCoeff(), cstar(pair) * std::pow(r, 2.5) * sup_w);
  set_conclusion(rep, w, pair.lambda, pair.delta, kr);
  return rep;
}

double cutoff_radius(const PairLD& pair, double r) { return (1.0 + eps_eta(pair)) * r; }

std::vector<double> lemma_gm_scales(const Grid3& grid, const PairLD& pair, double r, double rho, int count) {
  const double lo = std::max(rho, 2.0 * grid.spacing());
  if (!(lo < 1.0)) throw RangeError("no scales between max(rho, 2 spacing) and 1");
  std::vector<double> nodes = log_spaced(lo, 1.0, count);
  const double edge = std::max(cutoff_radius(pair, r), rho);
  if (edge > grid.spacing() && edge <= 1.0) {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), edge);
    if (it == nodes.end() || std::abs(*it - edge) > 1e-12 * edge) nodes.insert(it, edge);
  }
  return nodes;
}

double lemma_gm_rhs_factor(const PairLD& pair, double p, double theta, double alpha, double rho, double r,
                           LemmaMode mode) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw RangeError("exponent p must be finite and >= 1");
  if (!(r > 0.0) || !(r <= 1.0)) throw RangeError("r must lie in (0, 1]");
  WeightSpec{alpha, rho, theta}.validate();
  const double eps = eps_const(pair, p, theta, alpha);
  const double big_r = cutoff_radius(pair, r);
  if (big_r > 1.0) throw RangeError("the cutoff radius (1 + eta) r exceeds 1");

  const double pc = conjugate_exponent(p);
  double k = 0.0;
  if (std::isinf(pc)) {
    k = mode == LemmaMode::Curl ? 4.0 : 3.0;
  } else {
    k = mode == LemmaMode::Curl ? 3.0 + (pc - 3.0) / pc : 3.0 - 3.0 / pc;
  }
  const double rv = std::max(r, rho);
  if (std::isinf(theta)) return eps * std::pow(rv, -alpha) * std::pow(r, k);

  const double at = alpha * theta;
  const double edge = std::max(big_r, rho);
  const double factor = std::pow((1.0 - std::pow(edge, at - 1.0)) / (at - 1.0), 1.0 / theta);
  return eps * std::pow(rv, (1.0 - at) / theta) * std::pow(r, k) * factor;
}

VerifyReport check_lemma_gm(const VectorField& f, const PairLD& pair, double p, double theta, double alpha,
                            double rho, double r, LemmaMode mode, double band, int nodes) {
  check_band(band);
  const Grid3& g = f.grid();
  const double factor = lemma_gm_rhs_factor(pair, p, theta, alpha, rho, r, mode);
  require_resolved(g, r, "r");

  VerifyReport rep;
  rep.band = band;
  rep.params = VerifyParams{"gm", pair.lambda, pair.delta, r, p, theta, alpha, rho, mode};
  const VectorField w = mode == LemmaMode::Curl ? curl(f) : f;
  const double sup_w = sup_norm(w);
  if (sup_w == 0.0 || (mode == LemmaMode::Curl && vanishes(sup_w, f))) {
    rep.degenerate = true;
    rep.premise_holds = true;
    return rep;
  }
  const MorreyParams params{p, WeightSpec{alpha, rho, theta}, lemma_gm_scales(g, pair, r, rho, nodes)};
  set_premise(rep, gm_norm(f, params).value, factor * sup_w);
  set_conclusion(rep, w, pair.lambda, pair.delta, r);
  return rep;
}

VectorField counterexample_vorticity(double r, const PairLD& pair, const Grid3& grid, const Index3& x0) {
  const double h = grid.spacing();
  const double inner = kappa(pair) * r;
  const double outer = inner + 3.0 * h;
  if (!(inner >= 4.0 * h)) throw RangeError("kappa r must be at least four grid spacings");
  if (!(outer < grid.box_len() / 4.0)) throw RangeError("counterexample bump does not fit in the box");
  const Point c = grid.center(x0);
  VectorField bump(grid);
  for (Eigen::Index v = 0; v < grid.size(); ++v) {
    const double d = grid.displacement(c, grid.center(grid.unflat(v))).norm();
    double b = 0.0;
    if (d <= inner) {
      b = 1.0;
    } else if (d < outer) {
      const double t = (d - inner) / (outer - inner);
      b = 1.0 - t * t * (3.0 - 2.0 * t);
    }
    bump.data()(v, 0) = b;
  }
  return leray_project(bump);
}

VectorField counterexample_field(double r, const PairLD& pair, const Grid3& grid, const Index3& x0) {
  return biot_savart(counterexample_vorticity(r, pair, grid, x0));
}

VectorField spike_field(const Grid3& grid, const Index3& c, double width) {
  if (!(width > 0.0)) throw RangeError("spike width must be positive");
  const double s = width * grid.spacing();
  const Point x0 = grid.center(c);
  VectorField potential(grid);
  for (Eigen::Index v = 0; v < grid.size(); ++v) {
    const double d2 = grid.displacement(x0, grid.center(grid.unflat(v))).squaredNorm();
    potential.data()(v, 2) = std::exp(-d2 / (2.0 * s * s));
  }
  VectorField out = curl(potential);
  out *= 1.0 / sup_norm(out);
  return out;
}

// ---------------------------------------------------------------------------
// Sweep spec parsing.

void SweepSpec::validate() const {
  if (lemma != "l2" && lemma != "gm") throw RangeError("lemma must be l2 or gm");
  if (n < 8 || n % 2 != 0) throw RangeError("n must be even and at least 8");
  if (!(kmax > 0.0)) throw RangeError("kmax must be positive");
  for (double d : deltas) {
    if (!(d > 0.0) || !(d < 1.0)) throw RangeError("every delta must lie in (0, 1)");
    admissible_pair(d);
  }
  for (double r : scales) {
    if (!(r > 0.0) || !(r <= 1.0)) throw RangeError("every scale must lie in (0, 1]");
  }
  if (seeds < 0) throw RangeError("seed count must be >= 0");
  if (!(margin > 0.0) || !(margin <= 1.0)) throw RangeError("margin must lie in (0, 1]");
  if (!(band >= 0.0) || !(band < 1.0)) throw RangeError("band must lie in [0, 1)");
  if (!(spike_width > 0.0)) throw RangeError("spike_width must be positive");
  if (lemma == "gm") {
    if (!(p >= 1.0) || !std::isfinite(p)) throw RangeError("p must be finite and >= 1");
    for (double t : thetas) WeightSpec{alpha, rho, t}.validate();
    for (double t : thetas) {
      if (std::isfinite(t) && !(alpha * t > 1.0)) throw RangeError("finite theta needs alpha theta > 1");
    }
    if (nodes < 2) throw RangeError("nodes must be >= 2");
  }
}

namespace {

nlohmann::json json_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

double real_from_json(const nlohmann::json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInfinity;
    throw RangeError("expected a number or \"inf\", got '" + s + "'");
  }
  if (!v.is_number()) throw RangeError("expected a number");
  return v.get<double>();
}

std::vector<double> reals_from_json(const nlohmann::json& v) {
  if (!v.is_array()) throw RangeError("expected an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(real_from_json(x));
  return out;
}

}  // namespace

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw RangeError("sweep spec must be a JSON object");
  SweepSpec s;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "lemma") s.lemma = v.get<std::string>();
      else if (key == "n") s.n = v.get<int>();
      else if (key == "kmax") s.kmax = real_from_json(v);
      else if (key == "deltas") s.deltas = reals_from_json(v);
      else if (key == "scales") s.scales = reals_from_json(v);
      else if (key == "first_seed") s.first_seed = v.get<std::uint64_t>();
      else if (key == "seeds") s.seeds = v.get<int>();
      else if (key == "margin") s.margin = real_from_json(v);
      else if (key == "band") s.band = real_from_json(v);
      else if (key == "spike_width") s.spike_width = real_from_json(v);
      else if (key == "modes") {
        if (!v.is_array()) throw RangeError("modes must be an array");
        s.modes.clear();
        for (const auto& m : v) s.modes.push_back(parse_lemma_mode(m.get<std::string>()));
      } else if (key == "thetas") s.thetas = reals_from_json(v);
      else if (key == "p") s.p = real_from_json(v);
      else if (key == "alpha") s.alpha = real_from_json(v);
      else if (key == "rho") s.rho = real_from_json(v);
      else if (key == "nodes") s.nodes = v.get<int>();
      else if (key == "adversarial") s.adversarial = v.get<bool>();
      else throw RangeError("unknown sweep key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw RangeError(std::string("malformed sweep spec: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::json to_json(const SweepSpec& s) {
  nlohmann::json thetas = nlohmann::json::array();
  for (double t : s.thetas) thetas.push_back(json_real(t));
  nlohmann::json modes = nlohmann::json::array();
  for (LemmaMode m : s.modes) modes.push_back(to_string(m));
  return {{"lemma", s.lemma},         {"n", s.n},
          {"kmax", s.kmax},           {"deltas", s.deltas},
          {"scales", s.scales},       {"first_seed", s.first_seed},
          {"seeds", s.seeds},         {"margin", s.margin},
          {"band", s.band},           {"spike_width", s.spike_width},
          {"modes", modes},           {"thetas", thetas},
          {"p", s.p},                 {"alpha", s.alpha},
          {"rho", s.rho},             {"nodes", s.nodes},
          {"adversarial", s.adversarial}};
}

// ---------------------------------------------------------------------------
// Sweep.

namespace {

/// Premise ratio of a g + s for p = 2 as a function of a. Ball integrals of
/// |a g + s|^2 are a^2 G + 2 a X + S, so each node needs three convolutions
/// once and every later evaluation is pointwise.
class QuadraticPremise {
 public:
  QuadraticPremise(const VectorField& g, const VectorField& s)
      : grid_(g.grid()),
        gg_(forward_transform(ScalarField(grid_, g.data().square().rowwise().sum()))),
        gs_(forward_transform(ScalarField(grid_, (g.data() * s.data()).rowwise().sum()))),
        ss_(forward_transform(ScalarField(grid_, s.data().square().rowwise().sum()))) {}

  struct Node {
    Eigen::ArrayXd g, x, s;
  };

  const Node& node(double radius) {
    auto it = cache_.find(radius);
    if (it != cache_.end()) return it->second;
    const auto kernel = ball_kernel(grid_, radius);
    const double vol = grid_.voxel_volume();
    Node nd{inverse_transform(grid_, gg_ * kernel->spectrum()).data() * vol,
            inverse_transform(grid_, gs_ * kernel->spectrum()).data() * vol,
            inverse_transform(grid_, ss_ * kernel->spectrum()).data() * vol};
    return cache_.emplace(radius, std::move(nd)).first->second;
  }

  /// sup_x of the L^theta combination over nodes of w_i ||a g + s||_{L^2(B_{r_i}(x))}.
  double lhs(double a, const std::vector<double>& radii, const std::vector<double>& weights,
             const std::vector<double>& quad, double theta) {
    std::vector<const Node*> nodes;
    for (double r : radii) nodes.push_back(&node(r));
    double best = 0.0;
    for (Eigen::Index x = 0; x < grid_.size(); ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& nd = *nodes[i];
        const double v = weights[i] * std::sqrt(std::max(0.0, a * a * nd.g[x] + 2.0 * a * nd.x[x] + nd.s[x]));
        if (std::isinf(theta)) {
          acc = std::max(acc, v);
        } else {
          acc += quad[i] * (theta == 2.0 ? v * v : std::pow(v, theta));
        }
      }
      best = std::max(best, acc);
    }
    return std::isinf(theta) ? best : std::pow(best, 1.0 / theta);
  }

 private:
  Grid3 grid_;
  SpectralArray gg_, gs_, ss_;
  std::map<double, Node> cache_;
};

double combined_sup(double a, const VectorField& g, const VectorField& s) {
  return std::sqrt((a * g.data() + s.data()).square().rowwise().sum().maxCoeff());
}

/// An amplitude a with ratio(a) <= margin, found by doubling then bisection
/// and accepted once ratio(a) >= (1 - tol) margin. Assumes ratio(0) <= margin.
template <typename Ratio>
double calibrate_amplitude(Ratio&& ratio, double margin, double tol) {
  double lo = 0.0;
  double hi = 1.0;
  double at_lo = ratio(0.0);
  for (double v = ratio(hi); v <= margin; v = ratio(hi)) {
    lo = hi;
    at_lo = v;
    hi *= 4.0;
    if (hi > 1e12) return lo;
  }
  for (int it = 0; it < 60 && at_lo < (1.0 - tol) * margin; ++it) {
    const double mid = lo == 0.0 && it < 20 ? hi / 8.0 : 0.5 * (lo + hi);
    const double v = ratio(mid);
    if (v <= margin) {
      lo = mid;
      at_lo = v;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// Random component, the divergence-free spike and its curls, and a point
/// bump e_1 exp(-|x - c|^2 / (2 s^2)) used in identity mode.
struct SeedFields {
  VectorField g, s, curl_g, curl_s, point;
  std::mt19937_64 rng;
};

SeedFields make_seed_fields(const SweepSpec& spec, const Grid3& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 12345);
  std::uniform_int_distribution<int> idx(0, grid.n() - 1);
  const Index3 c(idx(rng), idx(rng), idx(rng));
  VectorField g = random_band_limited_field(grid, spec.kmax, seed);
  VectorField s = spike_field(grid, c, spec.spike_width);
  VectorField cg = curl(g);
  VectorField cs = curl(s);
  const double width = spec.spike_width * grid.spacing();
  const Point x0 = grid.center(c);
  VectorField point(grid);
  for (Eigen::Index v = 0; v < grid.size(); ++v) {
    const double d2 = grid.displacement(x0, grid.center(grid.unflat(v))).squaredNorm();
    point.data()(v, 0) = std::exp(-d2 / (2.0 * width * width));
  }
  return {std::move(g), std::move(s), std::move(cg), std::move(cs), std::move(point), std::move(rng)};
}

VerifyParams base_params(const SweepSpec& spec, const PairLD& pair, double r) {
  VerifyParams p;
  p.lemma = spec.lemma;
  p.lambda = pair.lambda;
  p.delta = pair.delta;
  p.r = r;
  if (spec.lemma == "gm") {
    p.p = spec.p;
    p.alpha = spec.alpha;
    p.rho = spec.rho;
  }
  return p;
}

SweepEntry unresolved_entry(std::uint64_t seed, VerifyParams params, double band) {
  SweepEntry e;
  e.seed = seed;
  e.status = "unresolved";
  e.report.params = std::move(params);
  e.report.band = band;
  return e;
}

SweepEntry vacuous_entry(std::uint64_t seed, VerifyParams params, double band, double lhs, double rhs) {
  SweepEntry e;
  e.seed = seed;
  e.status = "vacuous";
  e.report.params = std::move(params);
  e.report.band = band;
  set_premise(e.report, lhs, rhs);
  return e;
}

void sweep_l2(const SweepSpec& spec, const Grid3& grid, SeedFields& sf, QuadraticPremise& model,
              std::uint64_t seed, std::vector<SweepEntry>& out) {
  for (double delta : spec.deltas) {
    const PairLD pair = admissible_pair(delta);
    for (double r : spec.scales) {
      VerifyParams params = base_params(spec, pair, r);
      const double kr = kappa(pair) * r;
      if (!(kr > grid.spacing()) || !(r < grid.box_len() / 2.0)) {
        out.push_back(unresolved_entry(seed, params, spec.band));
        continue;
      }
      const double c = cstar(pair) * std::pow(r, 2.5);
      const std::vector<double> radii{r};
      const std::vector<double> ones{1.0};
      auto lhs = [&](double a) { return model.lhs(a, radii, ones, ones, kInfinity); };
      auto rhs = [&](double a) { return c * combined_sup(a, sf.curl_g, sf.curl_s); };
      if (lhs(0.0) > spec.margin * rhs(0.0)) {
        out.push_back(vacuous_entry(seed, params, spec.band, lhs(0.0), rhs(0.0)));
        continue;
      }
      const double a = calibrate_amplitude([&](double t) { return lhs(t) / rhs(t); }, spec.margin, 1e-9);
      SweepEntry e;
      e.seed = seed;
      e.status = "evaluated";
      e.amplitude = a;
      e.report = check_lemma_l2(a * sf.g + sf.s, pair, r, spec.band);
      out.push_back(std::move(e));
    }
  }
}

void sweep_gm(const SweepSpec& spec, const Grid3& grid, SeedFields& sf, std::uint64_t seed,
              std::vector<SweepEntry>& out) {
  std::optional<QuadraticPremise> curl_model, point_model;
  if (spec.p == 2.0) {
    curl_model.emplace(sf.g, sf.s);
    point_model.emplace(sf.g, sf.point);
  }
  for (double delta : spec.deltas) {
    const PairLD pair = admissible_pair(delta);
    for (double r : spec.scales) {
      for (LemmaMode mode : spec.modes) {
        for (double theta : spec.thetas) {
          VerifyParams params = base_params(spec, pair, r);
          params.mode = mode;
          params.theta = theta;
          double factor = 0.0;
          std::vector<double> radii;
          try {
            factor = lemma_gm_rhs_factor(pair, spec.p, theta, spec.alpha, spec.rho, r, mode);
            radii = lemma_gm_scales(grid, pair, r, spec.rho, spec.nodes);
          } catch (const RangeError&) {
            out.push_back(unresolved_entry(seed, params, spec.band));
            continue;
          }
          if (!(r > grid.spacing()) || !(r < grid.box_len() / 2.0)) {
            out.push_back(unresolved_entry(seed, params, spec.band));
            continue;
          }
          const bool curl_mode = mode == LemmaMode::Curl;
          const VectorField& spike = curl_mode ? sf.s : sf.point;
          const MorreyParams mp{spec.p, WeightSpec{spec.alpha, spec.rho, theta}, radii};
          std::vector<double> weights;
          for (double t : radii) weights.push_back(mp.weight(t));
          const std::vector<double> quad = scale_quadrature_weights(mp);
          QuadraticPremise* model = curl_mode ? (curl_model ? &*curl_model : nullptr)
                                              : (point_model ? &*point_model : nullptr);
          auto lhs = [&](double a) {
            if (model) return model->lhs(a, radii, weights, quad, theta);
            return gm_norm(a * sf.g + spike, mp).value;
          };
          const VectorField& wg = curl_mode ? sf.curl_g : sf.g;
          const VectorField& ws = curl_mode ? sf.curl_s : sf.point;
          auto rhs = [&](double a) { return factor * combined_sup(a, wg, ws); };
          const double lhs0 = lhs(0.0);
          const double rhs0 = rhs(0.0);
          if (lhs0 > spec.margin * rhs0) {
            out.push_back(vacuous_entry(seed, params, spec.band, lhs0, rhs0));
            continue;
          }
          const double tol = model ? 0.01 : 0.1;
          const double a = calibrate_amplitude([&](double t) { return lhs(t) / rhs(t); }, spec.margin, tol);
          SweepEntry e;
          e.seed = seed;
          e.status = "evaluated";
          e.amplitude = a;
          e.report = check_lemma_gm(a * sf.g + spike, pair, spec.p, theta, spec.alpha, spec.rho, r, mode,
                                    spec.band, spec.nodes);
          out.push_back(std::move(e));
        }
      }
    }
  }
}

void sweep_adversarial(const SweepSpec& spec, const Grid3& grid, SeedFields& sf, std::uint64_t seed,
                       std::vector<SweepEntry>& out) {
  std::uniform_int_distribution<int> idx(0, grid.n() - 1);
  for (double delta : spec.deltas) {
    const PairLD pair = admissible_pair(delta);
    for (double r : spec.scales) {
      const Index3 x0(idx(sf.rng), idx(sf.rng), idx(sf.rng));
      VerifyParams params = base_params(spec, pair, r);
      params.lemma = "l2";
      VectorField f(grid);
      try {
        f = counterexample_field(r, pair, grid, x0);
      } catch (const RangeError&) {
        out.push_back(unresolved_entry(seed, params, spec.band));
        continue;
      }
      SweepEntry e;
      e.seed = seed;
      e.status = "adversarial";
      e.report = check_lemma_l2(f, pair, r, spec.band);
      out.push_back(std::move(e));
    }
  }
}

}  // namespace

std::vector<SweepEntry> sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepEntry> out;
  if (spec.deltas.empty() || spec.scales.empty() || spec.seeds == 0) return out;
  const Grid3 grid(spec.n);
  for (int k = 0; k < spec.seeds; ++k) {
    const std::uint64_t seed = spec.first_seed + static_cast<std::uint64_t>(k);
    SeedFields sf = make_seed_fields(spec, grid, seed);
    if (spec.lemma == "l2") {
      QuadraticPremise model(sf.g, sf.s);
      sweep_l2(spec, grid, sf, model, seed, out);
    } else {
      sweep_gm(spec, grid, sf, seed, out);
    }
    if (spec.adversarial) sweep_adversarial(spec, grid, sf, seed, out);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
  return out;
}

SweepSummary summarize(const std::vector<SweepEntry>& entries) {
  SweepSummary s;
  s.total = entries.size();
  for (const auto& e : entries) {
    if (e.status == "evaluated") ++s.evaluated;
    if (e.status == "vacuous") ++s.vacuous;
    if (e.status == "unresolved") ++s.unresolved;
    if (e.status == "adversarial") ++s.adversarial;
    if (e.status == "unresolved" || e.status == "vacuous") continue;
    if (e.report.premise_holds) ++s.premise_held;
    if (e.report.marginal) ++s.marginal;
    if (!e.report.verdict()) ++s.violations;
  }
  return s;
}

nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json densities = nlohmann::json::object();
  for (int s = 0; s < 6; ++s) densities[level_set_name(s)] = r.per_set_densities[s];
  const VerifyParams& p = r.params;
  return {{"params",
           {{"lemma", p.lemma},
            {"lambda", p.lambda},
            {"delta", p.delta},
            {"r", p.r},
            {"p", p.p},
            {"theta", json_real(p.theta)},
            {"alpha", p.alpha},
            {"rho", p.rho},
            {"mode", to_string(p.mode)}}},
          {"premise_lhs", json_real(r.premise_lhs)},
          {"premise_rhs", json_real(r.premise_rhs)},
          {"band", r.band},
          {"premise_holds", r.premise_holds},
          {"marginal", r.marginal},
          {"degenerate", r.degenerate},
          {"conclusion_holds", r.conclusion_holds},
          {"per_set_densities", densities},
          {"verdict", r.verdict() ? "pass" : "fail"}};
}

nlohmann::json to_json(const SweepEntry& e) {
  return {{"index", e.index},
          {"seed", e.seed},
          {"status", e.status},
          {"amplitude", e.amplitude},
          {"report", to_json(e.report)}};
}

nlohmann::json to_json(const SweepSummary& s) {
  return {{"total", s.total},           {"evaluated", s.evaluated},   {"vacuous", s.vacuous},
          {"unresolved", s.unresolved}, {"adversarial", s.adversarial}, {"premise_held", s.premise_held},
          {"marginal", s.marginal},     {"violations", s.violations}};
}

std::string sweep_csv(const std::vector<SweepEntry>& entries) {
  std::ostringstream os;
  os << "index,seed,status,lemma,mode,lambda,delta,r,p,theta,alpha,rho,amplitude,premise_lhs,premise_rhs,"
        "premise_holds,marginal,degenerate,conclusion_holds,verdict";
  for (int s = 0; s < 6; ++s) os << ",density_" << level_set_name(s);
  os << '\n';
  char buf[32];
  auto num = [&](double x) -> const char* {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  };
  for (const auto& e : entries) {
    const VerifyReport& r = e.report;
    const VerifyParams& p = r.params;
    os << e.index << ',' << e.seed << ',' << e.status << ',' << p.lemma << ',' << to_string(p.mode);
    for (double x : {p.lambda, p.delta, p.r, p.p, p.theta, p.alpha, p.rho, e.amplitude, r.premise_lhs,
                     r.premise_rhs}) {
      os << ',' << num(x);
    }
    os << ',' << r.premise_holds << ',' << r.marginal << ',' << r.degenerate << ',' << r.conclusion_holds << ','
       << (r.verdict() ? "pass" : "fail");
    for (double d : r.per_set_densities) os << ',' << num(d);
    os << '\n';
  }
  return os.str();
}

}  // namespace msparse
