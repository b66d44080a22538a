#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "msparse/morrey.hpp"
#include "msparse/sparseness.hpp"

namespace msparse {

enum class LemmaMode { Curl, Identity };

std::string to_string(LemmaMode mode);
LemmaMode parse_lemma_mode(const std::string& text);

/// Relative guard band on premise comparisons.
inline constexpr double kGuardBand = 0.05;

struct VerifyParams {
  std::string lemma = "l2";  ///< "l2" or "gm"
  double lambda = 0.0;
  double delta = 0.0;
  double r = 0.0;
  double p = 2.0;
  double theta = kInfinity;
  double alpha = 0.0;
  double rho = 0.0;
  LemmaMode mode = LemmaMode::Curl;
};

/// Outcome of one implication check. The premise holds when
/// lhs <= (1 - band) * rhs; it is marginal when lhs lies in
/// ((1 - band) * rhs, rhs], which counts as not holding.
struct VerifyReport {
  VerifyParams params;
  double premise_lhs = 0.0;
  double premise_rhs = 0.0;
  double band = kGuardBand;
  bool premise_holds = false;
  bool marginal = false;
  bool degenerate = false;
  bool conclusion_holds = true;
  /// Largest ball density of each super-level set, in level_set_index order.
  std::array<double, 6> per_set_densities{};

  bool verdict() const noexcept { return !premise_holds || conclusion_holds; }
};

/// sup_x ||f||_{L^2(B_r(x))} against cstar r^{5/2} ||curl f||_inf; the
/// conclusion asks all six super-level sets of curl f to be (kappa r)-semi-mixed
/// with ratio delta. A vanishing curl is a degenerate pass.
VerifyReport check_lemma_l2(const VectorField& f, const PairLD& pair, double r, double band = kGuardBand);

/// Radius (1 + eta) r that the Morrey lemma's cutoff occupies.
double cutoff_radius(const PairLD& pair, double r);

/// Nodes used by check_lemma_gm: `count` log-spaced radii on
/// [max(rho, 2 spacing), 1] together with max(cutoff_radius, rho).
std::vector<double> lemma_gm_scales(const Grid3& grid, const PairLD& pair, double r, double rho, int count);

/// Premise right-hand side per unit sup norm:
/// eps (r v rho)^{(1 - alpha theta) / theta} r^{k} F, with k = 3 + (p' - 3) / p' in
/// curl mode and 3 - 3 / p' in identity mode. F = 1 for theta = inf and
/// [(1 - (R v rho)^{alpha theta - 1}) / (alpha theta - 1)]^{1/theta} otherwise,
/// with R = cutoff_radius. Throws RangeError when R > 1.
double lemma_gm_rhs_factor(const PairLD& pair, double p, double theta, double alpha, double rho, double r,
                           LemmaMode mode);

/// gm_norm(f) over lemma_gm_scales against the factor above times
/// ||curl f||_inf (curl mode) or ||f||_inf (identity mode); the conclusion asks
/// the six super-level sets of curl f or f to be r-semi-mixed with ratio delta.
VerifyReport check_lemma_gm(const VectorField& f, const PairLD& pair, double p, double theta, double alpha,
                            double rho, double r, LemmaMode mode, double band = kGuardBand, int nodes = 12);

/// Velocity whose vorticity is the Leray projection of a plateau bump
/// e_1 b(|x - x0|), b = 1 on B_{kappa r} and smoothly 0 beyond kappa r + 3 h.
/// S^{1,+} of its curl then covers B_{kappa r}(x0). Requires kappa r >= 4 h
/// and kappa r + 3 h < L / 4.
VectorField counterexample_field(double r, const PairLD& pair, const Grid3& grid, const Index3& x0);

/// Vorticity of counterexample_field before Biot-Savart inversion.
VectorField counterexample_vorticity(double r, const PairLD& pair, const Grid3& grid, const Index3& x0);

/// curl(phi e_3) for a Gaussian phi of standard deviation width * spacing
/// centered at c, scaled to unit sup norm.
VectorField spike_field(const Grid3& grid, const Index3& c, double width);

struct SweepSpec {
  std::string lemma = "l2";
  int n = 64;
  double kmax = 16.0;
  std::vector<double> deltas{0.7, 0.75, 0.85};
  std::vector<double> scales{0.1, 0.2, 0.4, 0.8};
  std::uint64_t first_seed = 1;
  int seeds = 20;
  double margin = 0.9;
  double band = kGuardBand;
  double spike_width = 0.45;
  // Morrey lemma only
  std::vector<LemmaMode> modes{LemmaMode::Curl, LemmaMode::Identity};
  std::vector<double> thetas{2.0, kInfinity};
  double p = 2.0;
  double alpha = 1.0;
  double rho = 0.05;
  int nodes = 12;
  bool adversarial = false;

  /// Throws RangeError on invalid entries.
  void validate() const;
};

/// Reads a spec; absent keys keep their defaults, unknown keys and wrong types
/// throw RangeError. theta accepts the string "inf".
SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepSpec& spec);

struct SweepEntry {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  /// "evaluated", "vacuous" (the premise fails already without the random
  /// component), "unresolved" (scale not representable on the grid) or
  /// "adversarial".
  std::string status;
  double amplitude = 0.0;
  VerifyReport report;
};

struct SweepSummary {
  std::size_t total = 0;
  std::size_t evaluated = 0;
  std::size_t vacuous = 0;
  std::size_t unresolved = 0;
  std::size_t adversarial = 0;
  std::size_t premise_held = 0;
  std::size_t marginal = 0;
  std::size_t violations = 0;
};

/// Cartesian product seeds x deltas x scales (x modes x thetas for "gm").
/// Each evaluated entry uses f = a g + s with g a random band-limited field
/// and s a spike (spike_field in curl mode, a point Gaussian e_1 bump of the
/// same width in identity mode), a chosen by bisection so that the premise
/// ratio is at most margin. With adversarial set, every (delta, scale) also gets one
/// counterexample field per seed. Entries are ordered by parameter index.
std::vector<SweepEntry> sweep(const SweepSpec& spec);

SweepSummary summarize(const std::vector<SweepEntry>& entries);

nlohmann::json to_json(const VerifyReport& report);
nlohmann::json to_json(const SweepEntry& entry);
nlohmann::json to_json(const SweepSummary& summary);

/// One row per entry with a header line.
std::string sweep_csv(const std::vector<SweepEntry>& entries);

}  // namespace msparse
