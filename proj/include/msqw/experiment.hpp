#pragma once

#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "msqw/propagate.hpp"
#include "msqw/protocol.hpp"

namespace msqw {

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

/// `points` values from lo to hi inclusive.
GridAxis linspace_axis(std::string name, double lo, double hi, int points);

/// Landscape over two axes; metric vectors are row-major over (axis1, axis2).
struct GridScanResult {
  GridAxis axis1;
  GridAxis axis2;
  std::vector<double> energy;
  std::vector<double> success_prob;
  std::vector<double> energy_se;  // zero for deterministic single runs
  std::vector<double> prob_se;
  Protocol protocol = Protocol::msqw;
  int stages = 1;
  std::string instance_id;
  std::uint64_t seed = 0;
  int samples = 1;
  std::string decay;  // empty for p = 1

  std::size_t index(std::size_t i, std::size_t j) const { return i * axis2.values.size() + j; }
  std::size_t argmin_energy() const;
  std::size_t argmax_prob() const;
  double min_energy() const { return energy[argmin_energy()]; }
  double max_prob() const { return success_prob[argmax_prob()]; }
};

struct SingleStageGrid {
  int points = 20;
  double gamma_max = 4.0;
  double t_max = 6.0;
  double alpha_max = std::numbers::pi / 2;
  double beta_max = std::numbers::pi / 2;
};

/// One deterministic run per grid point. QW axes (gamma, t); QAOA axes (alpha, beta).
GridScanResult scan_single_stage(const Problem& problem, Protocol protocol, const SingleStageGrid& grid,
                                 std::uint64_t seed = 0, int threads = 1);

struct DominanceRow {
  std::string instance_id;
  double qw_best_energy = 0.0;
  double qaoa_best_energy = 0.0;
  double qw_best_prob = 0.0;
  double qaoa_best_prob = 0.0;

  bool qw_wins_energy() const { return qw_best_energy < qaoa_best_energy; }
  bool qw_wins_prob() const { return qw_best_prob > qaoa_best_prob; }
};

struct DominanceReport {
  std::vector<DominanceRow> rows;
  int qw_energy_wins = 0;
  int qw_prob_wins = 0;
  int qw_both_wins = 0;
};

DominanceReport dominance_study(const std::vector<Problem>& problems, const SingleStageGrid& grid, int threads = 1);

struct MultistageGrid {
  int points = 20;
  double gamma_max = 4.0;
  double dgamma_max = 0.5;  // p >= 3 only
  DecayKind decay = DecayKind::geometric;
  double t_min = 0.1;
  double t_max = 0.5;
  int samples = 2000;
};

/// Per-stage hopping rates at one grid point: p = 2 uses (gamma1, gamma2)
/// directly, p >= 3 uses (gamma0, dgamma) through the heuristic decay.
std::vector<double> multistage_gammas(int p, DecayKind decay, double axis1, double axis2);

/// Time-averaged scan. Every grid point uses the same runtime draws (seed).
GridScanResult scan_multistage(const Problem& problem, Protocol protocol, int p, const MultistageGrid& grid,
                               std::uint64_t seed, int threads = 1);

enum class ScalingMethod { qaoa1, qaoa2, msqw };

struct ScalingReport {
  int n = 0;
  std::string instance_id;
  std::uint64_t seed = 0;
  std::string schedule_name;
  double t_total = 0.0;
  std::vector<int> p_values;
  std::vector<double> err_qaoa1;
  std::vector<double> err_qaoa2;
  std::vector<double> err_msqw;
  // Same errors measured against the reference at half its step count.
  std::vector<double> err_qaoa1_coarse;
  std::vector<double> err_qaoa2_coarse;
  std::vector<double> err_msqw_coarse;
  double h_max = 0.0;
  double hdot_max = 0.0;
  double commutator_norm = 0.0;
  double slope_qaoa1 = 0.0;
  double slope_qaoa2 = 0.0;
  double slope_msqw = 0.0;
  int reference_steps = 0;
  double reference_change = 0.0;
  std::set<ScalingMethod> methods;
};

/// Segment means of A and B over segment j of p equal segments.
std::pair<double, double> interval_average(const AnnealSchedule& schedule, int j, int p);

/// First-order QAOA over p segments: per segment, phase then driver.
DenseUnitary qaoa1_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule, int p);
/// Symmetric split: half driver, phase, half driver.
DenseUnitary qaoa2_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule, int p);
/// Exact exponential of the segment-averaged Hamiltonian on each segment.
DenseUnitary msqw_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule, int p);

/// OLS slope of log2(err) on log2(p) over the largest half of p values,
/// skipping errors below 1e-10. NaN when fewer than two points remain.
double fit_loglog_slope(const std::vector<int>& p_values, const std::vector<double>& errs);

/// Max spectral norm of H(t) and of its forward difference over a 1001-point grid.
std::pair<double, double> schedule_norms(const DiagonalEnergies& diag, const AnnealSchedule& schedule);

double commutator_norm(const DiagonalEnergies& diag);

ScalingReport scaling_study(const Problem& problem, const std::vector<int>& p_values, const AnnealSchedule& schedule,
                            const std::set<ScalingMethod>& methods = {ScalingMethod::qaoa1, ScalingMethod::qaoa2,
                                                                      ScalingMethod::msqw},
                            double reference_tol = 1e-8);

struct ProfileRow {
  int stage = 0;  // 1-based
  double gamma = 0.0;
  double alpha_over_t = 0.0;
  double beta_over_t = 0.0;
};

std::vector<ProfileRow> emit_schedule_profile(const HeuristicScheduleParams& params);

struct ProfileShape {
  bool alpha_strictly_decreasing = false;
  bool beta_strictly_increasing = false;
  int crossings = 0;
};

/// beta/t rounds to 1.0 once gamma drops below machine epsilon, so its
/// increase is judged on the complementary gap 1 - beta/t = alpha/t, which
/// keeps full relative precision.
ProfileShape analyze_profile(const std::vector<ProfileRow>& rows);

}  // namespace msqw
