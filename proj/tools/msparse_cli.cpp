// msparse: Morrey norms, sparseness diagnostics, lemma sweeps and the
// Navier-Stokes criterion harness from the command line.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "msparse/lemma_verify.hpp"
#include "msparse/morrey.hpp"
#include "msparse/nse.hpp"
#include "msparse/parallel.hpp"
#include "msparse/sparseness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace msparse;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit : int { kOk = 0, kCompute = 1, kUsage = 2, kInput = 3, kScheduling = 4 };

struct ExitError {
  int code;
  std::string message;
};

/// Runs fn and reports any toolkit error with the given exit code.
template <typename Fn>
auto guard(int code, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const msparse::Error& e) {
    throw ExitError{code, e.what()};
  }
}

json real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double parse_real(const std::string& text, const char* what) {
  if (text == "inf" || text == "infinity") return kInfinity;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ExitError{kUsage, std::string(what) + ": cannot parse '" + text + "' as a number"};
}

std::string fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExitError{kInput, "cannot read " + path};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

struct Common {
  std::string config;
  std::optional<int> threads;
  std::string out = "msparse_out";
};

class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv)
      : command_(std::move(command)), argv_(std::move(argv)), start_(std::chrono::steady_clock::now()) {}

  json params = json::object();

  void input(const std::string& path) { inputs_[path] = fnv1a_file(path); }
  void output(const std::string& path) { outputs_.push_back(path); }

  /// Creates the output directory, writes text there and records it.
  std::string emit(const std::string& dir, const std::string& name, const std::string& text) {
    const std::string path = (fs::path(dir) / name).string();
    write_text(path, text);
    output(path);
    return path;
  }

  void write(const std::string& dir) const {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m = {{"command", command_},
              {"argv", argv_},
              {"parameters", params},
              {"tool_version", kVersion},
              {"threads", thread_count()},
              {"input_hashes", inputs_},
              {"outputs", outputs_},
              {"wall_time_s", wall}};
    write_text((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::chrono::steady_clock::time_point start_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::string> outputs_;
};

void prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

void apply_threads(const Common& c) {
  if (!c.threads) return;
  if (*c.threads < 1) throw ExitError{kUsage, "--threads must be >= 1"};
  set_thread_count(*c.threads);
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON file whose keys stand in for flags");
  sub->add_option("--threads", c.threads, "worker threads (default: MORREY_SPARSE_THREADS or 1)");
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
}

/// Turns the object in a --config file into flags placed before the explicit
/// ones, so flags on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path || args.empty()) return args;
  std::ifstream in(*path);
  if (!in) throw ExitError{kInput, "cannot read config file " + *path};
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ExitError{kUsage, "malformed config file " + *path + ": " + e.what()};
  }
  if (!cfg.is_object()) throw ExitError{kUsage, "config file must hold a JSON object"};

  auto scalar = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number() || v.is_boolean()) return v.dump();
    throw ExitError{kUsage, "config values must be scalars or arrays of scalars"};
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        extra.push_back(flag);
        extra.push_back(scalar(v));
      }
    } else {
      extra.push_back(flag);
      extra.push_back(scalar(value));
    }
  }
  std::vector<std::string> out{args.front()};
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

json norm_json(const NormResult& r) {
  return {{"value", real(r.value)},
          {"argmax_center", {r.argmax_center[0], r.argmax_center[1], r.argmax_center[2]}},
          {"argmax_r", r.argmax_r}};
}

// ---------------------------------------------------------------------------

struct NormArgs {
  std::string field;
  std::string kind = "gm";
  double p = 2.0;
  std::string theta = "inf";
  double nu = 0.5;
  double rho = 0.25;
  int nodes = 32;
  std::vector<int> center{0, 0, 0};
  double alpha = 1.0;
  std::optional<double> r_min, r_max;
};

int cmd_norm(const NormArgs& a, const Common& c, Manifest& m) {
  static const std::set<std::string> kinds{"gm", "lm", "clm", "classical", "all"};
  if (!kinds.count(a.kind)) throw ExitError{kUsage, "--kind must be one of gm, lm, clm, classical, all"};
  if (a.center.size() != 3) throw ExitError{kUsage, "--center takes three indices"};
  const WeightSpec weight{a.nu, a.rho, parse_real(a.theta, "--theta")};
  guard(kUsage, [&] { weight.validate(); });
  if (a.nodes < 2) throw ExitError{kUsage, "--nodes must be >= 2"};

  m.input(a.field);
  const VectorField f = guard(kInput, [&] { return load_field(a.field); });
  const Grid3& g = f.grid();
  const MorreyParams params{a.p, weight, guard(kUsage, [&] { return default_scales(g, weight, a.nodes); })};
  guard(kUsage, [&] { params.validate(g); });
  const Index3 center(a.center[0], a.center[1], a.center[2]);
  const double r_min = a.r_min.value_or(std::max(a.rho, 2.0 * g.spacing()));
  const double r_max = a.r_max.value_or(1.0);

  m.params = {{"field", a.field},   {"kind", a.kind},     {"p", a.p},
              {"nu", a.nu},         {"rho", a.rho},       {"theta", real(weight.theta)},
              {"nodes", a.nodes},   {"center", a.center}, {"alpha", a.alpha},
              {"r_min", r_min},     {"r_max", r_max}};
  json report = {{"parameters", m.params}, {"grid", {{"n", g.n()}, {"box_len", g.box_len()}}}, {"scales", params.scales}};
  const bool all = a.kind == "all";
  if (all || a.kind == "gm") report["gm"] = norm_json(gm_norm(f, params));
  if (all || a.kind == "lm") report["lm"] = {{"center", a.center}, {"value", real(lm_norm(f, params, center))}};
  if (all || a.kind == "clm") report["clm"] = {{"center", a.center}, {"value", real(clm_norm(f, params, center))}};
  if (all || a.kind == "classical") {
    const NormResult r = guard(kUsage, [&] { return classical_morrey(f, a.p, a.alpha, r_min, r_max); });
    report["classical"] = norm_json(r);
  }
  prepare_out(c.out);
  m.emit(c.out, "norm.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct SparseArgs {
  std::optional<double> pair_from_delta;
  std::string field;
  std::optional<double> lambda;
  std::optional<double> delta;
  std::optional<double> r;
  std::optional<double> z_alpha;
  double c0 = 2.0;
  int nscales = 9;
};

json pair_json(const PairLD& pair) {
  json j = {{"delta", pair.delta}, {"lambda", pair.lambda}, {"h", pair.h}, {"product", pair.product()}};
  if (pair.product() > 1.0) {
    j["kappa"] = kappa(pair);
    j["cstar"] = cstar(pair);
  }
  return j;
}

int cmd_sparseness(const SparseArgs& a, const Common& c, Manifest& m) {
  if (a.pair_from_delta) {
    const PairLD pair = guard(kUsage, [&] { return admissible_pair(*a.pair_from_delta); });
    m.params = {{"pair_from_delta", *a.pair_from_delta}};
    const json j = {{"parameters", m.params}, {"pair", pair_json(pair)}};
    prepare_out(c.out);
    m.emit(c.out, "sparseness.json", j.dump(2) + "\n");
    std::printf("delta = %.17g\nlambda = %.17g\nh = %.17g\n", pair.delta, pair.lambda, pair.h);
    if (pair.product() > 1.0) std::printf("kappa = %.17g\ncstar = %.17g\n", kappa(pair), cstar(pair));
    return kOk;
  }
  if (a.field.empty()) throw ExitError{kUsage, "--field or --pair-from-delta is required"};
  if (!a.delta || !a.r) throw ExitError{kUsage, "--delta and --r are required with --field"};
  if (!(*a.delta > 0.0 && *a.delta < 1.0)) throw ExitError{kUsage, "--delta must lie in (0, 1)"};
  const double lambda = a.lambda ? *a.lambda : guard(kUsage, [&] { return admissible_pair(*a.delta).lambda; });
  if (!(lambda > 0.0 && lambda < 1.0)) throw ExitError{kUsage, "--lambda must lie in (0, 1)"};

  m.input(a.field);
  const VectorField f = guard(kInput, [&] { return load_field(a.field); });
  const Grid3& g = f.grid();
  if (!(*a.r > 0.0 && *a.r < g.box_len() / 2.0)) throw ExitError{kUsage, "--r must lie in (0, box_len / 2)"};

  m.params = {{"field", a.field}, {"lambda", lambda}, {"delta", *a.delta}, {"r", *a.r}};
  if (a.z_alpha) m.params.update({{"z_alpha", *a.z_alpha}, {"c0", a.c0}, {"nscales", a.nscales}});

  const auto sets = superlevel_sets(f, lambda);
  json js = json::array();
  bool all_ok = true;
  for (int s = 0; s < 6; ++s) {
    const SemiMixedResult r = semi_mixed(sets[s], *a.r, *a.delta);
    all_ok = all_ok && r.ok;
    js.push_back({{"set", level_set_name(s)},
                  {"volume_fraction", static_cast<double>(sets[s].count()) / static_cast<double>(g.size())},
                  {"semi_mixed", r.ok},
                  {"max_density", r.max_density},
                  {"witness", {r.witness[0], r.witness[1], r.witness[2]}}});
  }
  json report = {{"parameters", m.params}, {"sets", js}, {"all_semi_mixed", all_ok}};
  if (a.z_alpha) {
    const PairLD pair{lambda, *a.delta, 0.0};
    const ZAlphaResult z = guard(kUsage, [&] { return z_alpha_member(f, *a.z_alpha, pair, a.c0, a.nscales); });
    json w = json::array();
    for (const auto& x : z.witnesses) w.push_back({x[0], x[1], x[2]});
    report["z_alpha"] = {{"member", z.ok}, {"failing_voxels", z.failing}, {"witnesses", w}, {"scales", z.scales}};
  }
  prepare_out(c.out);
  m.emit(c.out, "sparseness.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string spec;
  bool adversarial = false;
  std::optional<int> seeds;
  std::optional<std::uint64_t> first_seed;
};

int cmd_verify(const VerifyArgs& a, const Common& c, Manifest& m) {
  SweepSpec spec;
  if (!a.spec.empty()) {
    m.input(a.spec);
    std::ifstream in(a.spec);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ExitError{kUsage, "malformed sweep spec: " + std::string(e.what())};
    }
    spec = guard(kUsage, [&] { return sweep_spec_from_json(j); });
  }
  if (a.adversarial) spec.adversarial = true;
  if (a.seeds) spec.seeds = *a.seeds;
  if (a.first_seed) spec.first_seed = *a.first_seed;
  guard(kUsage, [&] { spec.validate(); });
  m.params = to_json(spec);

  const auto entries = sweep(spec);
  const SweepSummary summary = summarize(entries);
  json list = json::array();
  for (const auto& e : entries) list.push_back(to_json(e));
  const json report = {{"spec", to_json(spec)}, {"summary", to_json(summary)}, {"entries", list}};
  prepare_out(c.out);
  m.emit(c.out, "verify.json", report.dump(2) + "\n");
  m.emit(c.out, "verify.csv", sweep_csv(entries));
  std::cout << to_json(summary).dump(2) << "\n";
  if (summary.violations > 0) {
    std::cerr << "error: " << summary.violations << " implication violation(s)\n";
    return kCompute;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const SolverConfig& cfg, const Common& c, Manifest& m) {
  guard(kUsage, [&] { cfg.validate(); });
  m.params = to_json(cfg);
  Trajectory traj = [&] {
    try {
      return simulate(cfg);
    } catch (const InstabilityError&) {
      throw;
    } catch (const RangeError& e) {
      throw ExitError{kUsage, e.what()};
    }
  }();
  prepare_out(c.out);
  for (const auto& p : save_trajectory(traj, c.out)) m.output(p);
  const auto& last = traj.series.back();
  const json summary = {{"config", to_json(cfg)},
                        {"steps", traj.series.size() - 1},
                        {"snapshots", traj.snapshots.size()},
                        {"final", {{"t", last.t}, {"u_sup", last.u_sup}, {"omega_sup", last.omega_sup},
                                   {"energy", last.energy}, {"enstrophy", last.enstrophy}}}};
  m.emit(c.out, "simulate.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct CriterionArgs {
  std::string traj;
  double alpha = 0.5, beta = 0.5, nu_w = 0.5, p = 2.0, c = 1.0, c0 = 2.0, eps0 = 0.1;
  std::string theta = "inf";
  std::string field = "u";
  std::string window = "vorticity";
  std::vector<double> at;
  std::string escape;
};

int cmd_criterion(const CriterionArgs& a, const Common& c, Manifest& m) {
  CriterionSpec spec;
  guard(kUsage, [&] {
    spec.alpha = a.alpha;
    spec.beta = a.beta;
    spec.nu_w = a.nu_w;
    spec.p = a.p;
    spec.theta = parse_real(a.theta, "--theta");
    spec.c = a.c;
    spec.c0 = a.c0;
    spec.eps0 = a.eps0;
    spec.field_mode = parse_field_mode(a.field);
    spec.window_mode = parse_window_mode(a.window);
    spec.validate();
  });
  const NormKind escape_norm = [&] {
    if (a.escape.empty()) return spec.window_mode == WindowMode::Velocity ? NormKind::Velocity : NormKind::Vorticity;
    if (a.escape == "u") return NormKind::Velocity;
    if (a.escape == "omega") return NormKind::Vorticity;
    throw ExitError{kUsage, "--escape must be 'u' or 'omega'"};
  }();

  const Trajectory traj = guard(kInput, [&] { return load_trajectory(a.traj); });
  for (const auto& e : fs::directory_iterator(a.traj)) {
    if (e.is_regular_file() && (e.path().extension() == ".fld" || e.path().filename() == "series.csv")) {
      m.input(e.path().string());
    }
  }

  const std::vector<double> escapes = detect_escape_times(traj.series, escape_norm);
  const bool user_times = !a.at.empty();
  const std::vector<double>& times = user_times ? a.at : escapes;
  m.params = {{"traj", a.traj}, {"spec", to_json(spec)}, {"at", a.at}, {"escape_norm", to_string(escape_norm)}};

  std::vector<CriterionReport> reports;
  for (double t : times) {
    try {
      reports.push_back(evaluate_criterion(traj, t, spec));
    } catch (const SchedulingError&) {
      throw;
    } catch (const RangeError& e) {
      throw ExitError{kUsage, e.what()};
    }
  }
  json list = json::array();
  for (const auto& r : reports) list.push_back(to_json(r));
  const json report = {{"parameters", m.params},
                       {"exponent", criterion_exponent(spec)},
                       {"escape_times", escapes},
                       {"times_source", user_times ? "at" : "escape"},
                       {"reports", list}};
  prepare_out(c.out);
  m.emit(c.out, "criterion.json", report.dump(2) + "\n");
  m.emit(c.out, "criterion.csv", trajectory_csv(traj, reports));
  if (!user_times && escapes.empty()) {
    std::cout << "no escape times in the trajectory; pass --at to evaluate at chosen times\n";
  }
  for (const auto& r : reports) {
    std::printf("t = %.17g  s* = %.17g  lhs = %.17g  rhs = %.17g  %s\n", r.t_escape, r.s_star, r.lhs, r.rhs,
                r.satisfied ? "satisfied" : "not satisfied");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CLI::App app{"Morrey-type norms, sparseness diagnostics and regularity-criterion harness", "msparse"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  NormArgs na;
  SparseArgs sa;
  VerifyArgs va;
  SolverConfig sc;
  CriterionArgs ca;

  auto* norm = app.add_subcommand("norm", "local and global Morrey-type norms of a field file");
  add_common(norm, common);
  norm->add_option("--field", na.field, "field file")->required();
  norm->add_option("--kind", na.kind, "gm | lm | clm | classical | all")->capture_default_str();
  norm->add_option("--p", na.p)->capture_default_str();
  norm->add_option("--theta", na.theta, "scale exponent or inf")->capture_default_str();
  norm->add_option("--nu", na.nu, "weight power")->capture_default_str();
  norm->add_option("--rho", na.rho, "weight cutoff")->capture_default_str();
  norm->add_option("--nodes", na.nodes, "log-spaced scale nodes")->capture_default_str();
  norm->add_option("--center", na.center, "voxel indices for lm and clm")
      ->expected(3)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  norm->add_option("--alpha", na.alpha, "classical Morrey exponent")->capture_default_str();
  norm->add_option("--r-min", na.r_min, "classical scale range (default max(rho, 2h))");
  norm->add_option("--r-max", na.r_max, "classical scale range (default 1)");

  auto* sparse = app.add_subcommand("sparseness", "super-level-set semi-mixedness and Z_alpha membership");
  add_common(sparse, common);
  sparse->add_option("--pair-from-delta", sa.pair_from_delta, "print the admissible pair for delta");
  sparse->add_option("--field", sa.field, "field file");
  sparse->add_option("--lambda", sa.lambda, "level (default: admissible pair of delta)");
  sparse->add_option("--delta", sa.delta, "density ratio");
  sparse->add_option("--r", sa.r, "ball radius");
  sparse->add_option("--z-alpha", sa.z_alpha, "also test Z_alpha membership");
  sparse->add_option("--c0", sa.c0)->capture_default_str();
  sparse->add_option("--nscales", sa.nscales)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "property sweep of the sparseness lemmas");
  add_common(verify, common);
  verify->add_option("--spec", va.spec, "sweep spec JSON")->check(CLI::ExistingFile);
  verify->add_flag("--adversarial", va.adversarial, "add counterexample fields");
  verify->add_option("--seeds", va.seeds, "override the seed count");
  verify->add_option("--first-seed", va.first_seed, "override the first seed");

  auto* sim = app.add_subcommand("simulate", "pseudo-spectral Navier-Stokes run");
  add_common(sim, common);
  sim->add_option("--ic", sc.ic.name, "shear | taylor-green | abc | random | zero")->capture_default_str();
  sim->add_option("--n", sc.n)->capture_default_str();
  sim->add_option("--dt", sc.dt)->capture_default_str();
  sim->add_option("--t-end", sc.t_end)->capture_default_str();
  sim->add_option("--snapshot-every", sc.snapshot_every)->capture_default_str();
  sim->add_option("--amplitude", sc.ic.amplitude)->capture_default_str();
  sim->add_option("--kmax", sc.ic.kmax, "random ic band limit")->capture_default_str();
  sim->add_option("--seed", sc.ic.seed)->capture_default_str();
  sim->add_option("--box-len", sc.box_len)->capture_default_str();

  auto* crit = app.add_subcommand("criterion", "restricted Morrey criterion along a trajectory");
  add_common(crit, common);
  crit->add_option("--traj", ca.traj, "directory written by simulate")->required();
  crit->add_option("--alpha", ca.alpha)->capture_default_str();
  crit->add_option("--beta", ca.beta)->capture_default_str();
  crit->add_option("--nu-w", ca.nu_w)->capture_default_str();
  crit->add_option("--p", ca.p)->capture_default_str();
  crit->add_option("--theta", ca.theta)->capture_default_str();
  crit->add_option("--c", ca.c, "cutoff constant")->capture_default_str();
  crit->add_option("--c0", ca.c0, "window constant")->capture_default_str();
  crit->add_option("--eps0", ca.eps0)->capture_default_str();
  crit->add_option("--field", ca.field, "u | omega")->capture_default_str();
  crit->add_option("--window", ca.window, "velocity | vorticity")->capture_default_str();
  crit->add_option("--at", ca.at, "evaluation times instead of escape times")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  crit->add_option("--escape", ca.escape, "norm for escape detection: u | omega");

  try {
    std::vector<std::string> expanded = expand_config(args);
    std::reverse(expanded.begin(), expanded.end());
    try {
      app.parse(expanded);
    } catch (const CLI::ParseError& e) {
      const int rc = app.exit(e);
      return rc == 0 ? kOk : kUsage;
    }
    apply_threads(common);

    CLI::App* sub = app.get_subcommands().front();
    Manifest manifest(sub->get_name(), args);
    if (!common.config.empty()) manifest.input(common.config);
    int rc = kOk;
    if (sub == norm) rc = cmd_norm(na, common, manifest);
    if (sub == sparse) rc = cmd_sparseness(sa, common, manifest);
    if (sub == verify) rc = cmd_verify(va, common, manifest);
    if (sub == sim) rc = cmd_simulate(sc, common, manifest);
    if (sub == crit) rc = cmd_criterion(ca, common, manifest);
    manifest.write(common.out);
    return rc;
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const SchedulingError& e) {
    std::cerr << "scheduling error: " << e.what() << "\n";
    return kScheduling;
  } catch (const InstabilityError& e) {
    std::cerr << "instability: " << e.what() << " (last good t = " << e.last_good_time() << ")\n";
    return kCompute;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kInput;
  } catch (const LoadError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const msparse::Error& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return kCompute;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kCompute;
  }
}
