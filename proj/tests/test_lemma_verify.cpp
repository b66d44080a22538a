#include <doctest.h>

#include "msparse/fields.hpp"
#include "msparse/lemma_verify.hpp"

using namespace msparse;

namespace {

void check_consistent(const VerifyReport& r) {
  CHECK(r.verdict() == (!r.premise_holds || r.conclusion_holds));
  if (r.marginal) CHECK_FALSE(r.premise_holds);
}

SweepSpec small_l2_spec() {
  SweepSpec s;
  s.deltas = {0.85};
  s.scales = {0.4, 0.8};
  s.seeds = 2;
  return s;
}

}  // namespace

TEST_CASE("degenerate fields pass trivially") {
  const Grid3 g(32);
  const PairLD pair = admissible_pair(0.75);
  const VectorField c = sample_field(g, [](double, double, double) { return Eigen::Vector3d(1.0, -2.0, 0.5); });
  const VerifyReport l2 = check_lemma_l2(c, pair, 0.5);
  CHECK(l2.degenerate);
  CHECK(l2.verdict());
  check_consistent(l2);

  const VerifyReport zero = check_lemma_gm(VectorField(g), pair, 2.0, kInfinity, 0.5, 0.1, 0.5, LemmaMode::Identity);
  CHECK(zero.degenerate);
  CHECK(zero.verdict());
  const VerifyReport curl_c = check_lemma_gm(c, pair, 2.0, 2.0, 1.0, 0.1, 0.5, LemmaMode::Curl);
  CHECK(curl_c.degenerate);
}

TEST_CASE("parameter validation") {
  const Grid3 g(32);
  const VectorField f = random_band_limited_field(g, 8.0, 1);
  const PairLD pair = admissible_pair(0.75);
  CHECK_THROWS_AS(check_lemma_l2(f, pair, 1.5), RangeError);
  CHECK_THROWS_AS(check_lemma_l2(f, pair, 0.1), RangeError);
  CHECK_THROWS_AS(check_lemma_l2(f, pair, 0.5, 1.0), RangeError);
  CHECK_THROWS_AS(check_lemma_gm(f, pair, 2.0, 2.0, 0.4, 0.1, 0.5, LemmaMode::Curl), RangeError);
  CHECK_THROWS_AS(check_lemma_gm(f, pair, 2.0, kInfinity, 0.5, 1.0, 0.5, LemmaMode::Curl), RangeError);
  CHECK_THROWS_AS(lemma_gm_rhs_factor(pair, 2.0, kInfinity, 0.5, 0.1, 1.0, LemmaMode::Curl), RangeError);
  CHECK(parse_lemma_mode("identity") == LemmaMode::Identity);
  CHECK_THROWS_AS(parse_lemma_mode("div"), RangeError);
}

TEST_CASE("reports are invariant under field scaling") {
  const Grid3 g(32);
  const PairLD pair = admissible_pair(0.85);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const VectorField f = random_band_limited_field(g, 8.0, seed);
    const VectorField big = 3.75 * f;
    const VerifyReport a = check_lemma_l2(f, pair, 0.8);
    const VerifyReport b = check_lemma_l2(big, pair, 0.8);
    CHECK(b.premise_lhs / a.premise_lhs == doctest::Approx(3.75).epsilon(1e-12));
    CHECK(b.premise_rhs / a.premise_rhs == doctest::Approx(3.75).epsilon(1e-12));
    CHECK(a.premise_holds == b.premise_holds);
    CHECK(a.conclusion_holds == b.conclusion_holds);
    CHECK(a.verdict() == b.verdict());
    CHECK(a.per_set_densities == b.per_set_densities);
    check_consistent(a);

    for (LemmaMode mode : {LemmaMode::Curl, LemmaMode::Identity}) {
      const VerifyReport c = check_lemma_gm(f, pair, 2.0, 2.0, 0.6, 0.5, 0.8, mode);
      const VerifyReport d = check_lemma_gm(big, pair, 2.0, 2.0, 0.6, 0.5, 0.8, mode);
      CHECK(d.premise_lhs / c.premise_lhs == doctest::Approx(3.75).epsilon(1e-12));
      CHECK(d.premise_rhs / c.premise_rhs == doctest::Approx(3.75).epsilon(1e-12));
      CHECK(c.verdict() == d.verdict());
      CHECK(c.premise_holds == d.premise_holds);
      check_consistent(c);
    }
  }
}

TEST_CASE("smooth band-limited fields do not meet the premise") {
  const Grid3 g(32);
  const PairLD pair = admissible_pair(0.85);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const VerifyReport r = check_lemma_l2(random_band_limited_field(g, 8.0, seed), pair, 0.8);
    CHECK_FALSE(r.premise_holds);
    CHECK(r.verdict());
  }
}

TEST_CASE("premise exponents") {
  const PairLD pair = admissible_pair(0.75);
  // curl mode, p = 2, theta = inf, alpha = 1/2: r^{5/2} (r v rho)^{-1/2} = r^2 once r >= rho
  const double a = lemma_gm_rhs_factor(pair, 2.0, kInfinity, 0.5, 0.05, 0.2, LemmaMode::Curl);
  const double b = lemma_gm_rhs_factor(pair, 2.0, kInfinity, 0.5, 0.05, 0.4, LemmaMode::Curl);
  CHECK(std::log(b / a) / std::log(2.0) == doctest::Approx(2.0).epsilon(1e-12));
  // identity mode: r^{3 - 3/p'} (r v rho)^{-alpha}
  const double c = lemma_gm_rhs_factor(pair, 2.0, kInfinity, 0.5, 0.05, 0.2, LemmaMode::Identity);
  const double d = lemma_gm_rhs_factor(pair, 2.0, kInfinity, 0.5, 0.05, 0.4, LemmaMode::Identity);
  CHECK(std::log(d / c) / std::log(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  // below rho only the r^k part moves
  const double e = lemma_gm_rhs_factor(pair, 3.0, kInfinity, 0.7, 0.5, 0.1, LemmaMode::Curl);
  const double f = lemma_gm_rhs_factor(pair, 3.0, kInfinity, 0.7, 0.5, 0.2, LemmaMode::Curl);
  CHECK(std::log(f / e) / std::log(2.0) == doctest::Approx(3.0 + (1.5 - 3.0) / 1.5).epsilon(1e-12));
  // p = 1 has p' = inf
  const double g1 = lemma_gm_rhs_factor(pair, 1.0, kInfinity, 0.0, 0.5, 0.1, LemmaMode::Identity);
  const double g2 = lemma_gm_rhs_factor(pair, 1.0, kInfinity, 0.0, 0.5, 0.2, LemmaMode::Identity);
  CHECK(g2 / g1 == doctest::Approx(8.0).epsilon(1e-12));

  // finite theta factor against a direct midpoint integral of s^{-alpha theta} over [R v rho, 1]
  const double alpha = 0.8;
  const double theta = 2.0;
  const double r = 0.3;
  const double rho = 0.1;
  const double big_r = cutoff_radius(pair, r);
  double integral = 0.0;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) {
    const double s = big_r + (1.0 - big_r) * (i + 0.5) / steps;
    integral += std::pow(s, -alpha * theta) * (1.0 - big_r) / steps;
  }
  const double expected = eps_const(pair, 2.0, theta, alpha) * std::pow(r, (1.0 - alpha * theta) / theta) *
                          std::pow(r, 2.5) * std::pow(integral, 1.0 / theta) *
                          std::pow(big_r, (alpha * theta - 1.0) / theta);
  CHECK(lemma_gm_rhs_factor(pair, 2.0, theta, alpha, rho, r, LemmaMode::Curl) ==
        doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("Morrey lemma nodes include the cutoff radius") {
  const Grid3 g(32);
  const PairLD pair = admissible_pair(0.9);
  const auto nodes = lemma_gm_scales(g, pair, 0.5, 0.1, 8);
  CHECK(std::is_sorted(nodes.begin(), nodes.end()));
  CHECK(std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end());
  CHECK(std::find(nodes.begin(), nodes.end(), cutoff_radius(pair, 0.5)) != nodes.end());
  CHECK(nodes.front() == doctest::Approx(2.0 * g.spacing()));
  CHECK(nodes.back() == 1.0);
  const auto above = lemma_gm_scales(g, pair, 0.2, 0.6, 8);
  CHECK(above.front() == 0.6);
  CHECK(above.size() == 8);
}

TEST_CASE("counterexample fields") {
  const Grid3 g(48);
  for (double delta : {0.75, 0.85}) {
    const PairLD pair = admissible_pair(delta);
    const Index3 x0(7, 30, 44);
    const double r = 0.6;
    const VectorField w = counterexample_vorticity(r, pair, g, x0);
    CHECK(divergence(w).data().abs().maxCoeff() <= 1e-10);
    const VectorField f = counterexample_field(r, pair, g, x0);
    const VectorField back = curl(f);
    CHECK((back.data() - w.data()).abs().maxCoeff() <= 1e-2 * sup_norm(w));

    const auto sets = superlevel_sets(back, pair.lambda);
    const VoxelSet& s1 = sets[level_set_index(0, true)];
    const double kr = kappa(pair) * r;
    CHECK(sparse_3d(s1, x0, kr) >= delta + 0.05);
    CHECK_FALSE(semi_mixed(s1, kr, delta).ok);

    const VerifyReport rep = check_lemma_l2(f, pair, r);
    CHECK_FALSE(rep.premise_holds);
    CHECK_FALSE(rep.conclusion_holds);
    CHECK(rep.verdict());
  }
  CHECK_THROWS_AS(counterexample_field(0.2, admissible_pair(0.75), g, Index3(0, 0, 0)), RangeError);
}

TEST_CASE("spike fields") {
  const Grid3 g(32);
  const VectorField s = spike_field(g, Index3(3, 4, 5), 0.45);
  CHECK(sup_norm(s) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(divergence(s).data().abs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(spike_field(g, Index3(0, 0, 0), 0.0), RangeError);
}

TEST_CASE("sweep spec parsing") {
  const SweepSpec d;
  const SweepSpec back = sweep_spec_from_json(to_json(d));
  CHECK(to_json(back) == to_json(d));
  CHECK(to_json(d)["thetas"][1] == "inf");

  const auto spec = sweep_spec_from_json(nlohmann::json::parse(R"({"lemma": "gm", "p": 1, "modes": ["identity"],
      "thetas": [2, "inf"], "alpha": 0.6, "rho": 0.5, "seeds": 3})"));
  CHECK(spec.lemma == "gm");
  CHECK(spec.modes.size() == 1);
  CHECK(std::isinf(spec.thetas[1]));
  CHECK(spec.seeds == 3);

  CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"colour": 1})")), RangeError);
  CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"seeds": "many"})")), RangeError);
  CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"thetas": ["huge"]})")), RangeError);
  CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"deltas": [0.4]})")), DomainError);
  CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"lemma": "gm", "alpha": 0.4})")), RangeError);
  CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse("[1, 2]")), RangeError);
}

TEST_CASE("empty sweep") {
  SweepSpec s;
  s.scales.clear();
  CHECK(sweep(s).empty());
  s = SweepSpec{};
  s.seeds = 0;
  CHECK(sweep(s).empty());
  CHECK(summarize({}).total == 0);
}

TEST_CASE("L2 lemma sweep is sound and deterministic") {
  SweepSpec spec = small_l2_spec();
  spec.adversarial = true;
  const auto a = sweep(spec);
  const auto b = sweep(spec);
  CHECK(sweep_csv(a) == sweep_csv(b));
  const SweepSummary sum = summarize(a);
  CHECK(sum.total == a.size());
  CHECK(sum.total == sum.evaluated + sum.vacuous + sum.unresolved + sum.adversarial);
  CHECK(sum.evaluated > 0);
  CHECK(sum.violations == 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].index == i);
    check_consistent(a[i].report);
    if (a[i].status == "evaluated") {
      CHECK(a[i].report.premise_holds);
      CHECK(a[i].report.premise_lhs <= spec.margin * a[i].report.premise_rhs * (1.0 + 1e-6));
    }
    if (a[i].status == "adversarial") CHECK_FALSE(a[i].report.premise_holds);
  }

  const std::string csv = sweep_csv(a);
  const auto header_cols = std::count(csv.begin(), csv.begin() + csv.find('\n'), ',');
  std::size_t pos = csv.find('\n') + 1;
  while (pos < csv.size()) {
    const std::size_t end = csv.find('\n', pos);
    CHECK(std::count(csv.begin() + pos, csv.begin() + end, ',') == header_cols);
    pos = end + 1;
  }
  const auto j = to_json(a.front());
  CHECK(j["report"]["params"]["theta"] == "inf");
  CHECK(j["report"]["per_set_densities"].size() == 6);
}

TEST_CASE("Morrey lemma sweep is sound in both modes") {
  SweepSpec curl_spec;
  curl_spec.lemma = "gm";
  curl_spec.deltas = {0.9};
  curl_spec.scales = {0.8};
  curl_spec.seeds = 2;
  curl_spec.alpha = 0.6;
  curl_spec.rho = 0.5;
  curl_spec.nodes = 8;
  curl_spec.modes = {LemmaMode::Curl};
  SweepSpec id_spec = curl_spec;
  id_spec.p = 1.0;
  id_spec.modes = {LemmaMode::Identity};
  for (const SweepSpec& spec : {curl_spec, id_spec}) {
    const auto entries = sweep(spec);
    const SweepSummary sum = summarize(entries);
    CHECK(sum.total == 4);
    CHECK(sum.evaluated == 4);
    CHECK(sum.premise_held == 4);
    CHECK(sum.violations == 0);
  }
}
