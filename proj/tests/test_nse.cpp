#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "msparse/nse.hpp"

using namespace msparse;

namespace {

SolverConfig config_for(const std::string& ic, int n, double dt, double t_end, int every = 20) {
  SolverConfig c;
  c.n = n;
  c.dt = dt;
  c.t_end = t_end;
  c.ic.name = ic;
  c.snapshot_every = every;
  return c;
}

std::vector<SeriesRow> rows(const std::vector<double>& v) {
  std::vector<SeriesRow> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back({0.1 * i, v[i], v[i], 0, 0});
  return out;
}

}  // namespace

TEST_CASE("shear eigenflow decays exactly") {
  const Trajectory traj = simulate(config_for("shear", 32, 1e-3, 1.0, 250));
  REQUIRE(traj.series.size() == 1001);
  for (const auto& row : traj.series) {
    CHECK(std::abs(row.u_sup - std::exp(-row.t)) <= 1e-6 * std::exp(-row.t));
  }
  CHECK(traj.series.back().t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(traj.series.back().u_sup == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(traj.snapshots.size() == 5);
}

TEST_CASE("ABC flow is a decaying Beltrami eigenflow") {
  const Trajectory traj = simulate(config_for("abc", 16, 0.01, 0.5, 10));
  const double u0 = traj.series.front().u_sup;
  for (const auto& row : traj.series) {
    CHECK(row.u_sup == doctest::Approx(u0 * std::exp(-row.t)).epsilon(1e-9));
    CHECK(row.omega_sup == doctest::Approx(row.u_sup).epsilon(1e-9));
  }
}

TEST_CASE("zero data stays zero") {
  const Trajectory traj = simulate(config_for("zero", 16, 0.01, 0.2, 5));
  for (const auto& row : traj.series) {
    CHECK(row.u_sup == 0.0);
    CHECK(row.energy == 0.0);
  }
}

TEST_CASE("Taylor-Green: divergence-free snapshots and decaying energy") {
  const Trajectory traj = simulate(config_for("taylor-green", 32, 5e-3, 0.5, 10));
  for (std::size_t i = 1; i < traj.series.size(); ++i) {
    CHECK(traj.series[i].energy < traj.series[i - 1].energy);
    CHECK(traj.series[i].t > traj.series[i - 1].t);
  }
  for (const auto& s : traj.snapshots) {
    CHECK(divergence(s.u).data().abs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("random data: energy inequality and reproducibility") {
  SolverConfig c = config_for("random", 16, 0.01, 0.3, 10);
  c.ic.amplitude = 3.0;
  c.ic.seed = 7;
  const Trajectory a = simulate(c);
  const Trajectory b = simulate(c);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  CHECK((a.snapshots.back().u.data() == b.snapshots.back().u.data()).all());
  for (std::size_t i = 1; i < a.series.size(); ++i) CHECK(a.series[i].energy <= a.series[i - 1].energy);
}

TEST_CASE("time-step convergence is fourth order") {
  std::vector<double> err;
  const double ref = [] {
    return simulate(config_for("taylor-green", 16, 0.005, 0.5, 1000)).series.back().omega_sup;
  }();
  for (double dt : {0.1, 0.05, 0.025}) {
    err.push_back(std::abs(simulate(config_for("taylor-green", 16, dt, 0.5, 1000)).series.back().omega_sup - ref));
  }
  const double order1 = std::log2(err[0] / err[1]);
  const double order2 = std::log2(err[1] / err[2]);
  MESSAGE("observed orders " << order1 << ", " << order2);
  CHECK(order1 >= 3.5);
  CHECK(order2 >= 3.5);
}

TEST_CASE("solver config validation") {
  CHECK_THROWS_AS(simulate(config_for("shear", 32, 0.2, 1.0)), RangeError);  // CFL
  CHECK_THROWS_AS(simulate(config_for("vortex", 16, 0.01, 0.1)), RangeError);
  CHECK_THROWS_AS(simulate(config_for("shear", 16, 0.0, 0.1)), RangeError);
  CHECK_THROWS_AS(simulate(config_for("shear", 16, 0.03, 0.1)), RangeError);  // not a whole step count
  SolverConfig c = config_for("shear", 16, 0.01, 0.1);
  c.nu = 0.5;
  CHECK_THROWS_AS(simulate(c), RangeError);
}

TEST_CASE("escape times") {
  CHECK(detect_escape_times(rows({5, 4, 3, 2, 1}), NormKind::Velocity).empty());
  CHECK(detect_escape_times(rows({1, 2, 3, 4}), NormKind::Vorticity).size() == 3);
  CHECK(escape_indices({1, 3, 2, 4, 5}) == std::vector<std::size_t>{0, 2, 3});
  CHECK(escape_indices({2, 2, 3}) == std::vector<std::size_t>{1});
  CHECK(escape_indices({7}).empty());
}

TEST_CASE("escape-time property: qualifying samples are exceeded by every later one") {
  std::vector<double> v;
  std::uint64_t s = 12345;
  for (int i = 0; i < 200; ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    v.push_back(static_cast<double>(s >> 40));
  }
  const auto idx = escape_indices(v);
  std::size_t next = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    bool all_exceed = true;
    for (std::size_t j = i + 1; j < v.size(); ++j) all_exceed = all_exceed && v[j] > v[i];
    const bool listed = next < idx.size() && idx[next] == i;
    CHECK(listed == all_exceed);
    if (listed) ++next;
  }
  CHECK(next == idx.size());
}

TEST_CASE("dissipation scale") {
  const Grid3 g(32);
  const auto a = dissipation_scale(4.0, 0.5, 1.0, g);
  CHECK(a.eta == 0.5);
  CHECK_FALSE(a.clipped);
  CHECK(dissipation_scale(1.0, 0.7, 0.5, g).eta == doctest::Approx(0.5));
  const auto big = dissipation_scale(1e12, 0.5, 1.0, g);
  CHECK(big.eta == 2.0 * g.spacing());
  CHECK(big.clipped);
  CHECK(dissipation_scale(1e-6, 0.5, 1.0, g).eta == 1.0);
  CHECK_THROWS_AS(dissipation_scale(0.0, 0.5, 1.0, g), RangeError);
}

TEST_CASE("criterion exponents and balance") {
  CriterionSpec s;
  s.alpha = 0.5;
  s.beta = 0.5;
  s.nu_w = 0.5;
  s.p = 2.0;
  s.theta = kInfinity;
  s.window_mode = WindowMode::Vorticity;
  CHECK(std::abs(criterion_exponent(s)) <= 1e-15);

  CriterionSpec z = s;
  z.alpha = 0.0;
  z.nu_w = 3.0;
  CHECK(criterion_exponent(z) == 1.0);

  CriterionSpec f = s;
  f.theta = 4.0;
  f.nu_w = 1.0;
  CHECK(criterion_exponent(f) == doctest::Approx(0.5 * 0.75 - 0.5 * 2.5 + 1.0));

  CriterionSpec v = s;
  v.window_mode = WindowMode::Velocity;
  CHECK(criterion_exponent(v) == doctest::Approx(0.5 * 0.5 - 0.5 * 1.5 + 1.0));
  CHECK_THROWS_AS(solve_balance(v, BalanceUnknown::NuW), UnsolvableBalanceError);

  const CriterionSpec nu = solve_balance(s, BalanceUnknown::NuW);
  CHECK(nu.nu_w == doctest::Approx(0.5));
  for (BalanceUnknown u : {BalanceUnknown::NuW, BalanceUnknown::Beta, BalanceUnknown::Alpha}) {
    CriterionSpec g = s;
    g.nu_w = 0.9;
    g.theta = 3.0;
    g.alpha = 0.4;
    g.beta = 0.3;
    double e = 0.0;
    try {
      e = criterion_exponent(solve_balance(g, u));
    } catch (const UnsolvableBalanceError&) {
      continue;
    }
    CHECK(std::abs(e) <= 1e-12);
  }
  CriterionSpec bad = s;
  bad.theta = 2.0;
  bad.nu_w = 0.4;
  CHECK_THROWS_AS(criterion_exponent(bad), RangeError);
}

TEST_CASE("criterion on the shear flow") {
  const Trajectory traj = simulate(config_for("shear", 16, 0.01, 1.0, 2));
  CriterionSpec s;
  s.eps0 = 1e6;
  const CriterionReport r = evaluate_criterion(traj, 0.0, s);
  CHECK(r.satisfied);
  CHECK(r.window_lo == doctest::Approx(0.125));
  CHECK(r.window_hi == doctest::Approx(0.5));
  CHECK(r.samples.size() >= 3);
  CHECK(std::isfinite(r.lhs));
  CHECK(r.lhs > 0.0);
  s.eps0 = 0.0;
  CHECK_FALSE(evaluate_criterion(traj, 0.0, s).satisfied);

  CHECK_THROWS_AS(evaluate_criterion(traj, 2.0, s), RangeError);
  const Trajectory sparse = simulate(config_for("shear", 16, 0.01, 1.0, 50));
  CHECK_THROWS_AS(evaluate_criterion(sparse, 0.0, s), SchedulingError);
}

TEST_CASE("criterion lhs matches the classical restricted Morrey quantity") {
  SolverConfig c = config_for("taylor-green", 32, 5e-3, 0.3, 2);
  c.ic.amplitude = 4.0;
  const Trajectory traj = simulate(c);
  CriterionSpec s;
  s.eps0 = 0.1;
  const CriterionReport r = evaluate_criterion(traj, 0.05, s);
  for (const auto& smp : r.samples) {
    REQUIRE(smp.eta < 1.0);
    const NormResult cm = classical_morrey(traj.snapshots[smp.snapshot].u, 2.0, 1.0, smp.eta, 1.0);
    CHECK(smp.lhs * smp.lhs == doctest::Approx(cm.value).epsilon(1e-9));
  }
}

TEST_CASE("trajectory files round trip") {
  const Trajectory traj = simulate(config_for("taylor-green", 16, 0.01, 0.2, 5));
  const auto dir = std::filesystem::temp_directory_path() / "msparse_test_traj";
  std::filesystem::remove_all(dir);
  const auto paths = save_trajectory(traj, dir.string());
  CHECK(paths.size() == 1 + traj.snapshots.size());
  const Trajectory back = load_trajectory(dir.string());
  REQUIRE(back.snapshots.size() == traj.snapshots.size());
  REQUIRE(back.series.size() == traj.series.size());
  for (std::size_t i = 0; i < traj.series.size(); ++i) {
    CHECK(back.series[i].t == traj.series[i].t);
    CHECK(back.series[i].omega_sup == traj.series[i].omega_sup);
  }
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    CHECK(back.snapshots[i].t == traj.snapshots[i].t);
    CHECK((back.snapshots[i].u.data() == traj.snapshots[i].u.data()).all());
  }
  CHECK(trajectory_csv(back) == trajectory_csv(traj));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_trajectory(dir.string()), IoError);
}
