#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msqw/model.hpp"
#include "msqw/propagate.hpp"
#include "msqw/state.hpp"

namespace msqw {

enum class Protocol { msqw, qaoa };
enum class DecayKind { geometric, linear };

std::string to_string(Protocol p);
std::string to_string(DecayKind d);
Protocol parse_protocol(const std::string& s);  // throws UsageError
DecayKind parse_decay(const std::string& s);    // throws UsageError

/// An instance together with its energy table and exact ground state.
struct Problem {
  SpinGlassInstance instance;
  DiagonalEnergies diag;
  GroundStateRecord ground;

  static Problem from(SpinGlassInstance inst);
  int qubits() const { return instance.n; }
};

struct MsqwStage {
  double gamma = 0.0;
  double t = 0.0;
};

struct MsqwSchedule {
  std::vector<MsqwStage> stages;
  void validate() const;
};

struct QaoaStage {
  double alpha = 0.0;  // driver duration
  double beta = 0.0;   // problem duration
};

struct QaoaSchedule {
  std::vector<QaoaStage> stages;
  void validate() const;
};

struct HeuristicScheduleParams {
  double gamma0 = 1.0;
  double delta_gamma = 0.0;
  int p = 1;
  DecayKind decay = DecayKind::geometric;
  double t_min = 0.1;
  double t_max = 0.5;
  int samples = 2000;

  void validate() const;
};

/// geometric: gamma_{j+1} = gamma_j (1 - dgamma).
/// linear: gamma_k = gamma0 - k dgamma / gamma0, clamped at 0.
struct GammaSequence {
  std::vector<double> gammas;
  bool clamped = false;  // linear mode hit zero
};
GammaSequence heuristic_gammas(const HeuristicScheduleParams& params);

struct HeuristicSchedule {
  MsqwSchedule msqw;
  QaoaSchedule qaoa;
  GammaSequence gammas;
};

/// alpha = gamma t / (1 + gamma), beta = t / (1 + gamma).
std::pair<double, double> map_gamma_to_qaoa(double gamma, double t);

HeuristicSchedule build_heuristic_schedule(const HeuristicScheduleParams& params, const std::vector<double>& runtimes);

/// Stages applied in order starting from |+>^n.
StateVector run_msqw(const DiagonalEnergies& diag, const MsqwSchedule& schedule, QwCache* cache = nullptr);

/// Each stage: problem phase beta_j first, then driver rotation alpha_j.
StateVector run_qaoa(const DiagonalEnergies& diag, const QaoaSchedule& schedule);

struct MetricSample {
  double energy = 0.0;
  double success_prob = 0.0;
  double energy_se = 0.0;  // standard error of the mean; 0 for single runs
  double prob_se = 0.0;
  int samples = 1;
  std::uint64_t seed = 0;
  Protocol protocol = Protocol::msqw;
  std::vector<double> params;  // flattened stage pairs, or per-stage gammas when time-averaged
};

/// Energy <H_P> and the probability mass on every ground-state minimizer.
MetricSample measure_metrics(const StateVector& state, const DiagonalEnergies& diag, const GroundStateRecord& gs);

struct TimeAverageSpec {
  Protocol protocol = Protocol::msqw;
  std::vector<double> gammas;
  double t_min = 0.1;
  double t_max = 0.5;
  int samples = 2000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Per-sample stream for runtime draws, derived only from (seed, index).
std::vector<double> sample_runtimes(std::uint64_t seed, std::uint64_t index, std::size_t stages, double t_min,
                                    double t_max);

MetricSample time_averaged_metrics(const Problem& problem, const TimeAverageSpec& spec, QwCache* cache = nullptr);

/// Means after every stage boundary, plus the paired stage-to-stage energy
/// change and its standard error.
struct StageTrajectory {
  std::vector<MetricSample> after_stage;
  std::vector<double> energy_step_mean;  // mean of E_{j+1} - E_j
  std::vector<double> energy_step_se;
};
StageTrajectory time_averaged_trajectory(const Problem& problem, const TimeAverageSpec& spec,
                                         QwCache* cache = nullptr);

// ---- schedule files ----

struct ScheduleFile {
  Protocol protocol = Protocol::msqw;
  std::string decay = "explicit";  // geometric | linear | explicit
  double gamma0 = 0.0;
  double delta_gamma = 0.0;
  int p = 0;
  std::vector<std::array<double, 2>> stages;  // (gamma, t) or (alpha, beta)
};

std::string schedule_to_json(const ScheduleFile& s);
ScheduleFile schedule_from_json(const std::string& text);
ScheduleFile schedule_file_for(const HeuristicScheduleParams& params, const HeuristicSchedule& sched, Protocol protocol);
MsqwSchedule to_msqw(const ScheduleFile& s);
QaoaSchedule to_qaoa(const ScheduleFile& s);

}  // namespace msqw
