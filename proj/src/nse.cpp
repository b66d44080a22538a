#include "msparse/nse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "msparse/fft.hpp"
#include "msparse/fields.hpp"
#include "msparse/preduality.hpp"

namespace msparse {

using cd = std::complex<double>;

void SolverConfig::validate() const {
  Grid3 check(n, box_len);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw RangeError("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw RangeError("t_end must be positive");
  const double steps = t_end / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    throw RangeError("t_end must be a whole number of time steps");
  }
  if (nu != 1.0) throw RangeError("viscosity is fixed to 1");
  if (snapshot_every < 1) throw RangeError("snapshot_every must be >= 1");
  if (!std::isfinite(ic.amplitude)) throw RangeError("amplitude must be finite");
  static const char* names[] = {"shear", "taylor-green", "abc", "random", "zero"};
  if (std::find(std::begin(names), std::end(names), ic.name) == std::end(names)) {
    throw RangeError("unknown initial condition '" + ic.name + "'");
  }
  if (ic.name == "random" && !(ic.kmax >= 1.0)) throw RangeError("kmax must be >= 1");
}

VectorField initial_velocity(const SolverConfig& config) {
  config.validate();
  const Grid3 grid(config.n, config.box_len);
  const double s = 2.0 * std::numbers::pi / config.box_len;
  const double a = config.ic.amplitude;
  const std::string& name = config.ic.name;
  VectorField u(grid);
  if (name == "shear") {
    u = sample_field(grid, [&](double, double y, double) { return Eigen::Vector3d(a * std::sin(s * y), 0, 0); });
  } else if (name == "taylor-green") {
    u = sample_field(grid, [&](double x, double y, double z) {
      return Eigen::Vector3d(a * std::sin(s * x) * std::cos(s * y) * std::cos(s * z),
                             -a * std::cos(s * x) * std::sin(s * y) * std::cos(s * z), 0.0);
    });
  } else if (name == "abc") {
    u = sample_field(grid, [&](double x, double y, double z) {
      return Eigen::Vector3d(a * (std::sin(s * z) + std::cos(s * y)), a * (std::sin(s * x) + std::cos(s * z)),
                             a * (std::sin(s * y) + std::cos(s * x)));
    });
  } else if (name == "random") {
    u = a * random_band_limited_field(grid, config.ic.kmax, config.ic.seed);
  }
  return u;
}

// ---------------------------------------------------------------------------

namespace {

struct Spectral3 {
  std::array<SpectralArray, 3> c;
  explicit Spectral3(Eigen::Index size) : c{SpectralArray(size), SpectralArray(size), SpectralArray(size)} {}
};

/// Time stepper with its wavenumber tables and scratch buffers.
class Stepper {
 public:
  Stepper(const Grid3& grid, double dt) : g_(grid), plan_(FftPlan3::get(grid.n())) {
    const Eigen::Index m = g_.spectral_size();
    kx_.resize(m);
    ky_.resize(m);
    kz_.resize(m);
    k2_.resize(m);
    keep_.resize(m);
    const int n = g_.n();
    const int nz = n / 2 + 1;
    Eigen::Index s = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < nz; ++k, ++s) {
          const bool nyq = i == n / 2 || j == n / 2 || k == n / 2;
          kx_[s] = nyq ? 0.0 : g_.wavenumber(i);
          ky_[s] = nyq ? 0.0 : g_.wavenumber(j);
          kz_[s] = nyq ? 0.0 : g_.wavenumber(k);
          k2_[s] = kx_[s] * kx_[s] + ky_[s] * ky_[s] + kz_[s] * kz_[s];
          keep_[s] = !nyq && k2_[s] > 0.0 && 3 * std::abs(g_.mode(i)) < n && 3 * std::abs(g_.mode(j)) < n &&
                     3 * std::abs(g_.mode(k)) < n;
        }
      }
    }
    half_ = (-k2_ * dt / 2.0).exp();
    full_ = half_.square();
    u_ = Eigen::ArrayXXd(g_.size(), 3);
    w_ = Eigen::ArrayXXd(g_.size(), 3);
    scratch_.resize(m);
    real_.resize(g_.size());
  }

  /// Leray projection with the mean and Nyquist modes removed.
  void project(Spectral3& v) const {
    for (Eigen::Index s = 0; s < k2_.size(); ++s) {
      if (k2_[s] == 0.0) {
        v.c[0][s] = v.c[1][s] = v.c[2][s] = 0.0;
        continue;
      }
      const cd kd = (kx_[s] * v.c[0][s] + ky_[s] * v.c[1][s] + kz_[s] * v.c[2][s]) / k2_[s];
      v.c[0][s] -= kx_[s] * kd;
      v.c[1][s] -= ky_[s] * kd;
      v.c[2][s] -= kz_[s] * kd;
    }
  }

  Spectral3 transform(const VectorField& f) {
    Spectral3 out(g_.spectral_size());
    for (int c = 0; c < 3; ++c) {
      real_ = f.data().col(c);
      plan_.forward(real_.data(), out.c[c].data());
    }
    return out;
  }

  /// Fills u_ and w_ (velocity and vorticity) from a spectral state.
  void physical(const Spectral3& v) {
    const double inv = 1.0 / static_cast<double>(g_.size());
    for (int c = 0; c < 3; ++c) {
      scratch_ = v.c[c];
      plan_.inverse(scratch_.data(), real_.data());
      u_.col(c) = real_ * inv;
    }
    const cd I(0.0, 1.0);
    for (int c = 0; c < 3; ++c) {
      const int a = (c + 1) % 3;
      const int b = (c + 2) % 3;
      const Eigen::ArrayXd& ka = a == 0 ? kx_ : (a == 1 ? ky_ : kz_);
      const Eigen::ArrayXd& kb = b == 0 ? kx_ : (b == 1 ? ky_ : kz_);
      scratch_ = I * (ka * v.c[b] - kb * v.c[a]);
      plan_.inverse(scratch_.data(), real_.data());
      w_.col(c) = real_ * inv;
    }
  }

  /// Projected, dealiased transform of u x omega for the state v.
  Spectral3 nonlinear(const Spectral3& v) {
    physical(v);
    return nonlinear_from_physical();
  }

  Spectral3 nonlinear_from_physical() {
    Spectral3 out(g_.spectral_size());
    for (int c = 0; c < 3; ++c) {
      const int a = (c + 1) % 3;
      const int b = (c + 2) % 3;
      real_ = u_.col(a) * w_.col(b) - u_.col(b) * w_.col(a);
      plan_.forward(real_.data(), out.c[c].data());
    }
    for (Eigen::Index s = 0; s < k2_.size(); ++s) {
      if (!keep_[s]) out.c[0][s] = out.c[1][s] = out.c[2][s] = 0.0;
    }
    project(out);
    return out;
  }

  /// One integrating-factor RK4 step. Expects physical() to hold v already.
  void step(Spectral3& v, double dt) {
    const Spectral3 a = nonlinear_from_physical();
    Spectral3 tmp(g_.spectral_size());
    for (int c = 0; c < 3; ++c) tmp.c[c] = half_ * (v.c[c] + (dt / 2.0) * a.c[c]);
    const Spectral3 b = nonlinear(tmp);
    for (int c = 0; c < 3; ++c) tmp.c[c] = half_ * v.c[c] + (dt / 2.0) * b.c[c];
    const Spectral3 cc = nonlinear(tmp);
    for (int c = 0; c < 3; ++c) tmp.c[c] = full_ * v.c[c] + dt * half_ * cc.c[c];
    const Spectral3 d = nonlinear(tmp);
    for (int c = 0; c < 3; ++c) {
      v.c[c] = full_ * v.c[c] + (dt / 6.0) * (full_ * a.c[c] + 2.0 * half_ * (b.c[c] + cc.c[c]) + d.c[c]);
    }
  }

  SeriesRow row(double t) const {
    const double vol = g_.voxel_volume();
    const Eigen::ArrayXd u2 = u_.square().rowwise().sum();
    const Eigen::ArrayXd w2 = w_.square().rowwise().sum();
    return {t, std::sqrt(u2.maxCoeff()), std::sqrt(w2.maxCoeff()), 0.5 * u2.sum() * vol, 0.5 * w2.sum() * vol};
  }

  VectorField velocity() const { return VectorField(g_, u_); }

 private:
  Grid3 g_;
  const FftPlan3& plan_;
  Eigen::ArrayXd kx_, ky_, kz_, k2_;
  Eigen::Array<bool, Eigen::Dynamic, 1> keep_;
  Eigen::ArrayXd half_, full_;
  Eigen::ArrayXXd u_, w_;
  SpectralArray scratch_;
  Eigen::ArrayXd real_;
};

}  // namespace

Trajectory simulate(const SolverConfig& config) {
  const VectorField u0 = initial_velocity(config);
  const Grid3& grid = u0.grid();
  const double limit = 0.5 * grid.spacing() / std::max(1.0, sup_norm(u0));
  if (config.dt > limit) throw RangeError("dt violates the CFL bound " + std::to_string(limit));

  const auto steps = static_cast<std::size_t>(std::llround(config.t_end / config.dt));
  Stepper stepper(grid, config.dt);
  Spectral3 v = stepper.transform(u0);
  stepper.project(v);

  Trajectory traj{grid, {}, {}};
  traj.series.reserve(steps + 1);
  double last_good = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    stepper.physical(v);
    const SeriesRow row = stepper.row(t);
    if (!std::isfinite(row.u_sup) || !std::isfinite(row.omega_sup)) {
      throw InstabilityError(last_good, "non-finite velocity after t = " + std::to_string(last_good));
    }
    last_good = t;
    traj.series.push_back(row);
    if (k % static_cast<std::size_t>(config.snapshot_every) == 0 || k == steps) {
      traj.snapshots.push_back({k, t, stepper.velocity()});
    }
    if (k == steps) break;
    stepper.step(v, config.dt);
  }
  return traj;
}

const SeriesRow& Trajectory::row_at(double t) const {
  if (series.empty()) throw RangeError("empty trajectory");
  auto it = std::lower_bound(series.begin(), series.end(), t,
                             [](const SeriesRow& r, double x) { return r.t < x; });
  if (it == series.end()) return series.back();
  if (it != series.begin() && std::abs(std::prev(it)->t - t) <= std::abs(it->t - t)) return *std::prev(it);
  return *it;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> escape_indices(const std::vector<double>& values) {
  std::vector<std::size_t> out;
  if (values.size() < 2) return out;
  double later_min = values.back();
  for (std::size_t i = values.size() - 1; i-- > 0;) {
    if (values[i] < later_min) out.push_back(i);
    later_min = std::min(later_min, values[i]);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<double> detect_escape_times(const std::vector<SeriesRow>& series, NormKind which) {
  std::vector<double> values;
  values.reserve(series.size());
  for (const auto& r : series) values.push_back(which == NormKind::Velocity ? r.u_sup : r.omega_sup);
  std::vector<double> out;
  for (std::size_t i : escape_indices(values)) out.push_back(series[i].t);
  return out;
}

DissipationScale dissipation_scale(double norm, double beta, double c, const Grid3& grid) {
  if (!(norm > 0.0) || !std::isfinite(norm)) throw RangeError("norm must be positive and finite");
  if (!(c > 0.0)) throw RangeError("cutoff constant must be positive");
  const double raw = c * std::pow(norm, -beta);
  const double lo = 2.0 * grid.spacing();
  if (raw < lo) return {lo, true};
  if (raw > 1.0) return {1.0, true};
  return {raw, false};
}

// ---------------------------------------------------------------------------

void CriterionSpec::validate() const {
  auto finite_nonneg = [](double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw RangeError(std::string(what) + " must be finite and >= 0");
  };
  finite_nonneg(alpha, "alpha");
  finite_nonneg(beta, "beta");
  finite_nonneg(nu_w, "nu_w");
  finite_nonneg(eps0, "eps0");
  if (!(p >= 1.0)) throw RangeError("p must be >= 1");
  if (!(theta > 1.0)) throw RangeError("theta must lie in (1, inf]");
  if (std::isfinite(theta) && !(nu_w * theta > 1.0)) throw RangeError("finite theta needs nu_w theta > 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw RangeError("c must be positive");
  if (!(c0 > 1.0) || !std::isfinite(c0)) throw RangeError("c0 must exceed 1");
}

namespace {

double window_power(const CriterionSpec& s) {
  const double pc = conjugate_exponent(s.p);
  if (s.window_mode == WindowMode::Vorticity) return std::isinf(pc) ? 4.0 : 3.0 + (pc - 3.0) / pc;
  return std::isinf(pc) ? 3.0 : 3.0 - 3.0 / pc;
}

double weight_gain(const CriterionSpec& s) {
  return std::isinf(s.theta) ? s.nu_w : (s.nu_w * s.theta - 1.0) / s.theta;
}

}  // namespace

double criterion_exponent(const CriterionSpec& spec) {
  spec.validate();
  return std::min(spec.alpha, spec.beta) * weight_gain(spec) - spec.alpha * window_power(spec) + 1.0;
}

CriterionSpec solve_balance(const CriterionSpec& spec, BalanceUnknown unknown) {
  CriterionSpec out = spec;
  const double k = window_power(spec);
  const auto fail = [](const std::string& why) { throw UnsolvableBalanceError("no admissible root: " + why); };
  switch (unknown) {
    case BalanceUnknown::NuW: {
      const double m = std::min(spec.alpha, spec.beta);
      if (m == 0.0) fail("alpha ^ beta = 0 removes nu_w from the exponent");
      const double x = (spec.alpha * k - 1.0) / m;
      out.nu_w = std::isinf(spec.theta) ? x : x + 1.0 / spec.theta;
      if (!(out.nu_w >= 0.0)) fail("nu_w = " + std::to_string(out.nu_w) + " < 0");
      if (std::isfinite(spec.theta) && !(out.nu_w * spec.theta > 1.0)) fail("nu_w theta <= 1");
      break;
    }
    case BalanceUnknown::Beta: {
      const double x = weight_gain(spec);
      if (x == 0.0) fail("the weight gain vanishes");
      const double b = (spec.alpha * k - 1.0) / x;
      if (!(b >= 0.0)) fail("beta < 0");
      if (b > spec.alpha) fail("the root exceeds alpha, where beta no longer enters");
      out.beta = b;
      break;
    }
    case BalanceUnknown::Alpha: {
      // Piecewise linear in alpha: slope x - k below beta, -k above.
      const double x = weight_gain(spec);
      double a = -1.0;
      if (x - k != 0.0) {
        const double lo = -1.0 / (x - k);
        if (lo >= 0.0 && lo <= spec.beta) a = lo;
      }
      if (a < 0.0) {
        const double hi = (1.0 + spec.beta * x) / k;
        if (hi >= spec.beta) a = hi;
      }
      if (!(a >= 0.0)) fail("alpha < 0");
      out.alpha = a;
      break;
    }
  }
  out.validate();
  return out;
}

std::vector<double> criterion_scales(const Grid3& grid, double eta, double theta) {
  if (eta >= 1.0) return {1.0};
  return std::isinf(theta) ? shell_scales(grid, eta, 1.0) : log_spaced(eta, 1.0, 32);
}

CriterionReport evaluate_criterion(const Trajectory& traj, double t_escape, const CriterionSpec& spec) {
  spec.validate();
  if (traj.series.empty() || traj.snapshots.empty()) throw RangeError("empty trajectory");
  const double slack = 1e-12 * std::max(1.0, std::abs(traj.series.back().t));
  if (t_escape < traj.series.front().t - slack || t_escape > traj.series.back().t + slack) {
    throw RangeError("t = " + std::to_string(t_escape) + " lies outside the trajectory");
  }
  const bool vort_window = spec.window_mode == WindowMode::Vorticity;
  auto norm_of = [&](const SeriesRow& r) { return vort_window ? r.omega_sup : r.u_sup; };

  CriterionReport rep;
  rep.spec = spec;
  rep.t_escape = t_escape;
  rep.exponent = criterion_exponent(spec);
  rep.norm_at_t = norm_of(traj.row_at(t_escape));
  if (!(rep.norm_at_t > 0.0)) throw RangeError("norm vanishes at t; the window is unbounded");
  const double scale = vort_window ? spec.c0 * rep.norm_at_t : spec.c0 * spec.c0 * rep.norm_at_t * rep.norm_at_t;
  rep.window_lo = t_escape + 1.0 / (4.0 * scale);
  rep.window_hi = t_escape + 1.0 / scale;

  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const double t = traj.snapshots[i].t;
    if (t >= rep.window_lo && t <= rep.window_hi) inside.push_back(i);
  }
  if (inside.size() < 3) {
    throw SchedulingError("window [" + std::to_string(rep.window_lo) + ", " + std::to_string(rep.window_hi) +
                          "] holds " + std::to_string(inside.size()) + " snapshots; at least 3 are needed");
  }

  const Grid3& grid = traj.grid;
  double best = kInfinity;
  for (std::size_t i : inside) {
    const Snapshot& snap = traj.snapshots[i];
    CriterionSample smp;
    smp.snapshot = i;
    smp.t = snap.t;
    smp.norm = norm_of(traj.row_at(snap.t));
    if (!(smp.norm > 0.0)) throw RangeError("norm vanishes inside the window");
    const auto eta = dissipation_scale(smp.norm, spec.beta, spec.c, grid);
    smp.eta = eta.eta;
    smp.eta_clipped = eta.clipped;
    smp.rhs = spec.eps0 * std::pow(smp.norm, rep.exponent);

    const std::vector<double> scales = criterion_scales(grid, smp.eta, spec.theta);
    if (scales.size() < 2 && std::isfinite(spec.theta)) {
      smp.lhs = 0.0;
      smp.witness_r = 1.0;
    } else {
      MorreyParams params{spec.p, WeightSpec{spec.nu_w, std::min(smp.eta, std::nextafter(1.0, 0.0)), spec.theta},
                          scales};
      const VectorField field = spec.field_mode == FieldMode::Velocity ? snap.u : curl(snap.u);
      const NormResult r = gm_norm(field, params);
      smp.lhs = r.value;
      smp.witness_center = r.argmax_center;
      smp.witness_r = r.argmax_r;
    }
    smp.satisfied = smp.lhs <= smp.rhs;

    const double ratio = smp.lhs / std::pow(smp.norm, rep.exponent);
    if (ratio < best) {
      best = ratio;
      rep.s_star = smp.t;
      rep.lhs = smp.lhs;
      rep.rhs = smp.rhs;
      rep.eta = smp.eta;
      rep.eta_clipped = smp.eta_clipped;
      rep.witness_center = smp.witness_center;
      rep.witness_r = smp.witness_r;
    }
    rep.samples.push_back(smp);
  }
  rep.satisfied = rep.lhs <= rep.rhs;
  return rep;
}

// ---------------------------------------------------------------------------

std::string to_string(NormKind kind) { return kind == NormKind::Velocity ? "u" : "omega"; }
std::string to_string(FieldMode mode) { return mode == FieldMode::Velocity ? "u" : "omega"; }
std::string to_string(WindowMode mode) { return mode == WindowMode::Velocity ? "velocity" : "vorticity"; }

FieldMode parse_field_mode(const std::string& text) {
  if (text == "u") return FieldMode::Velocity;
  if (text == "omega" || text == "w") return FieldMode::Vorticity;
  throw RangeError("field mode must be 'u' or 'omega', got '" + text + "'");
}

WindowMode parse_window_mode(const std::string& text) {
  if (text == "velocity" || text == "u") return WindowMode::Velocity;
  if (text == "vorticity" || text == "omega") return WindowMode::Vorticity;
  throw RangeError("window mode must be 'velocity' or 'vorticity', got '" + text + "'");
}

namespace {

nlohmann::json real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

nlohmann::json to_json(const SolverConfig& c) {
  return {{"n", c.n},
          {"box_len", c.box_len},
          {"dt", c.dt},
          {"t_end", c.t_end},
          {"nu", c.nu},
          {"snapshot_every", c.snapshot_every},
          {"ic", {{"name", c.ic.name}, {"amplitude", c.ic.amplitude}, {"kmax", c.ic.kmax}, {"seed", c.ic.seed}}}};
}

nlohmann::json to_json(const CriterionSpec& s) {
  return {{"alpha", s.alpha}, {"beta", s.beta},         {"nu_w", s.nu_w},
          {"p", s.p},         {"theta", real(s.theta)}, {"c", s.c},
          {"c0", s.c0},       {"eps0", s.eps0},         {"field_mode", to_string(s.field_mode)},
          {"window_mode", to_string(s.window_mode)}};
}

nlohmann::json to_json(const CriterionReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"t", s.t},
                       {"norm", s.norm},
                       {"eta", s.eta},
                       {"eta_clipped", s.eta_clipped},
                       {"lhs", real(s.lhs)},
                       {"rhs", real(s.rhs)},
                       {"satisfied", s.satisfied},
                       {"witness", {{"x", {s.witness_center[0], s.witness_center[1], s.witness_center[2]}},
                                    {"r", s.witness_r}}}});
  }
  return {{"spec", to_json(r.spec)},
          {"t_escape", r.t_escape},
          {"norm_at_t", r.norm_at_t},
          {"window", {r.window_lo, r.window_hi}},
          {"exponent", r.exponent},
          {"s_star", r.s_star},
          {"lhs", real(r.lhs)},
          {"rhs", real(r.rhs)},
          {"satisfied", r.satisfied},
          {"scale_window", {r.eta, 1.0}},
          {"eta_clipped", r.eta_clipped},
          {"witness",
           {{"x", {r.witness_center[0], r.witness_center[1], r.witness_center[2]}}, {"r", r.witness_r}}},
          {"samples", samples}};
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<CriterionReport>& reports) {
  std::ostringstream os;
  os << "t,u_sup,omega_sup,energy,enstrophy,eta,criterion_lhs,criterion_rhs,satisfied\n";
  for (const auto& row : traj.series) {
    os << fmt(row.t) << ',' << fmt(row.u_sup) << ',' << fmt(row.omega_sup) << ',' << fmt(row.energy) << ','
       << fmt(row.enstrophy);
    const CriterionSample* hit = nullptr;
    for (const auto& rep : reports) {
      for (const auto& s : rep.samples) {
        if (s.t == row.t) {
          hit = &s;
          break;
        }
      }
      if (hit) break;
    }
    if (hit) {
      os << ',' << fmt(hit->eta) << ',' << fmt(hit->lhs) << ',' << fmt(hit->rhs) << ',' << hit->satisfied;
    } else {
      os << ",,,,";
    }
    os << '\n';
  }
  return os.str();
}

std::string snapshot_filename(const Snapshot& snap) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "snapshot_%08zu_t%.17g.fld", snap.step, snap.t);
  return buf;
}

std::vector<std::string> save_trajectory(const Trajectory& traj, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  std::vector<std::string> paths;
  const std::string series = (fs::path(dir) / "series.csv").string();
  {
    std::ofstream out(series, std::ios::trunc);
    if (!out) throw IoError("cannot open " + series + " for writing");
    out << trajectory_csv(traj);
    if (!out) throw IoError("write failed for " + series);
  }
  paths.push_back(series);
  for (const auto& snap : traj.snapshots) {
    const std::string path = (fs::path(dir) / snapshot_filename(snap)).string();
    save_field(snap.u, path);
    paths.push_back(path);
  }
  return paths;
}

Trajectory load_trajectory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("trajectory directory " + dir + " does not exist");
  const fs::path series_path = fs::path(dir) / "series.csv";
  std::ifstream in(series_path);
  if (!in) throw IoError("cannot open " + series_path.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw LoadError(LoadError::Kind::MalformedHeader, "empty series.csv");
  const auto header = split(line);
  const char* want[] = {"t", "u_sup", "omega_sup", "energy", "enstrophy"};
  std::array<std::size_t, 5> col{};
  for (int i = 0; i < 5; ++i) {
    const auto it = std::find(header.begin(), header.end(), want[i]);
    if (it == header.end()) {
      throw LoadError(LoadError::Kind::MalformedHeader, std::string("series.csv lacks column ") + want[i]);
    }
    col[i] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<SeriesRow> series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    double v[5];
    for (int i = 0; i < 5; ++i) {
      try {
        if (col[i] >= cells.size()) throw std::invalid_argument("short row");
        v[i] = std::stod(cells[col[i]]);
      } catch (const std::exception&) {
        throw LoadError(LoadError::Kind::SizeMismatch, "malformed series row: " + line);
      }
    }
    series.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  if (series.empty()) throw LoadError(LoadError::Kind::SizeMismatch, "series.csv has no rows");

  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("snapshot_", 0) == 0 && e.path().extension() == ".fld") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw LoadError(LoadError::Kind::Io, "no snapshot files in " + dir);

  std::vector<Snapshot> snaps;
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    const auto tpos = name.find("_t");
    std::size_t step = 0;
    double t = 0.0;
    try {
      step = std::stoul(name.substr(9, tpos - 9));
      t = std::stod(name.substr(tpos + 2, name.size() - tpos - 2 - 4));
    } catch (const std::exception&) {
      throw LoadError(LoadError::Kind::MalformedHeader, "cannot parse snapshot name " + name);
    }
    snaps.push_back({step, t, load_field(path.string())});
  }
  const Grid3 grid = snaps.front().u.grid();
  for (const auto& s : snaps) {
    if (!(s.u.grid() == grid)) throw LoadError(LoadError::Kind::SizeMismatch, "snapshots disagree on the grid");
  }
  return Trajectory{grid, std::move(snaps), std::move(series)};
}

}  // namespace msparse
