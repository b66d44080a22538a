#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "msparse/grid.hpp"
#include "msparse/morrey.hpp"

namespace msparse {

struct InitialCondition {
  std::string name = "taylor-green";  ///< shear | taylor-green | abc | random | zero
  double amplitude = 1.0;
  double kmax = 4.0;  ///< random only
  std::uint64_t seed = 1;
};

struct SolverConfig {
  int n = 32;
  double box_len = 2.0 * std::numbers::pi;
  double dt = 1e-3;
  double t_end = 1.0;
  double nu = 1.0;
  InitialCondition ic;
  int snapshot_every = 20;

  /// Throws RangeError on bad sizes, dt <= 0, nu != 1 or an unknown ic.
  void validate() const;
};

/// Divergence-free initial velocity on the config grid.
VectorField initial_velocity(const SolverConfig& config);

struct SeriesRow {
  double t = 0.0;
  double u_sup = 0.0;
  double omega_sup = 0.0;
  double energy = 0.0;     ///< (1/2) int |u|^2
  double enstrophy = 0.0;  ///< (1/2) int |omega|^2
};

struct Snapshot {
  std::size_t step = 0;
  double t = 0.0;
  VectorField u;
};

struct Trajectory {
  Grid3 grid;
  std::vector<Snapshot> snapshots;
  std::vector<SeriesRow> series;

  /// Series row with time closest to t.
  const SeriesRow& row_at(double t) const;
};

/// Pseudo-spectral solve of u_t + (omega x u) + grad P = Delta u on the
/// torus: 2/3-rule dealiased rotational nonlinearity, Leray projection and
/// integrating-factor RK4. Rejects dt above 0.5 spacing / max(1, ||u0||_inf)
/// with RangeError; throws InstabilityError on non-finite values.
Trajectory simulate(const SolverConfig& config);

enum class NormKind { Velocity, Vorticity };

/// Times of samples whose value is strictly exceeded by every later sample.
/// The last sample never qualifies.
std::vector<double> detect_escape_times(const std::vector<SeriesRow>& series, NormKind which);
std::vector<std::size_t> escape_indices(const std::vector<double>& values);

struct DissipationScale {
  double eta = 0.0;
  bool clipped = false;
};

/// c * norm^{-beta} clipped to [2 spacing, 1]. Throws RangeError unless norm > 0.
DissipationScale dissipation_scale(double norm, double beta, double c, const Grid3& grid);

enum class FieldMode { Velocity, Vorticity };
enum class WindowMode { Velocity, Vorticity };

struct CriterionSpec {
  double alpha = 0.5;
  double beta = 0.5;
  double nu_w = 0.5;
  double p = 2.0;
  double theta = kInfinity;
  double c = 1.0;
  double c0 = 2.0;
  double eps0 = 0.1;
  FieldMode field_mode = FieldMode::Velocity;
  WindowMode window_mode = WindowMode::Vorticity;

  /// Throws RangeError on invalid entries.
  void validate() const;
};

/// (alpha ^ beta) X - alpha k + 1 with X = nu_w for theta = inf and
/// (nu_w theta - 1) / theta otherwise; k = 3 + (p' - 3) / p' for the
/// vorticity window and 3 - 3 / p' for the velocity window.
double criterion_exponent(const CriterionSpec& spec);

enum class BalanceUnknown { NuW, Beta, Alpha };

/// Copy of spec with the unknown replaced by the root of criterion_exponent = 0.
/// Throws UnsolvableBalanceError when no admissible root exists.
CriterionSpec solve_balance(const CriterionSpec& spec, BalanceUnknown unknown);

struct CriterionSample {
  std::size_t snapshot = 0;
  double t = 0.0;
  double norm = 0.0;
  double eta = 0.0;
  bool eta_clipped = false;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  Index3 witness_center = Index3::Zero();
  double witness_r = 0.0;
};

struct CriterionReport {
  CriterionSpec spec;
  double t_escape = 0.0;
  double norm_at_t = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double exponent = 0.0;
  double s_star = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double eta = 0.0;
  bool eta_clipped = false;
  Index3 witness_center = Index3::Zero();
  double witness_r = 0.0;
  std::vector<CriterionSample> samples;
};

/// Scale nodes on [eta, 1]: the exact shell radii for theta = inf, 32
/// log-spaced radii otherwise.
std::vector<double> criterion_scales(const Grid3& grid, double eta, double theta);

/// Minimizes gm_norm(field(s)) / norm(s)^exponent over the snapshots inside the
/// escape window of t_escape. Throws RangeError when t_escape lies outside
/// the series and SchedulingError when fewer than three snapshots fall in
/// the window.
CriterionReport evaluate_criterion(const Trajectory& traj, double t_escape, const CriterionSpec& spec);

std::string to_string(NormKind kind);
std::string to_string(FieldMode mode);
std::string to_string(WindowMode mode);
FieldMode parse_field_mode(const std::string& text);
WindowMode parse_window_mode(const std::string& text);

nlohmann::json to_json(const SolverConfig& config);
nlohmann::json to_json(const CriterionSpec& spec);
nlohmann::json to_json(const CriterionReport& report);

/// Series table with criterion columns filled at the samples of the reports.
std::string trajectory_csv(const Trajectory& traj, const std::vector<CriterionReport>& reports = {});

std::string snapshot_filename(const Snapshot& snap);

/// Writes series.csv and one field file per snapshot into dir; returns the
/// written paths in order.
std::vector<std::string> save_trajectory(const Trajectory& traj, const std::string& dir);

/// Reads a directory written by save_trajectory. Throws IoError or LoadError.
Trajectory load_trajectory(const std::string& dir);

}  // namespace msparse
