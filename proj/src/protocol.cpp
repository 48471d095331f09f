#include "msqw/protocol.hpp"

#include <cmath>
#include <random>
#include <string>

#include "json.hpp"
#include "msqw/errors.hpp"

namespace msqw {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Two-pass mean and standard error, summed in index order.
MeanSe mean_and_se(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return out;
}

double energy_of_amps(std::span<const Complex> amps, const DiagonalEnergies& diag) {
  double e = 0.0;
  for (std::size_t z = 0; z < amps.size(); ++z) e += diag.energies[z] * std::norm(amps[z]);
  return e;
}

double success_of_amps(std::span<const Complex> amps, const GroundStateRecord& gs) {
  double p = 0.0;
  for (Basis z : gs.minimizers) p += std::norm(amps[z]);
  return p;
}

// Per-sample energies and success probabilities after each stage:
// energy[stage][sample], prob[stage][sample]. Only the final stage is filled
// unless `all_stages`.
struct SampleTable {
  std::vector<std::vector<double>> energy;
  std::vector<std::vector<double>> prob;
};

SampleTable run_samples(const Problem& problem, const TimeAverageSpec& spec, QwCache* cache, bool all_stages) {
  spec.validate();
  const std::size_t p = spec.gammas.size();
  const auto samples = static_cast<std::size_t>(spec.samples);
  const std::size_t rows = all_stages ? p : 1;
  SampleTable table{std::vector<std::vector<double>>(rows, std::vector<double>(samples)),
                    std::vector<std::vector<double>>(rows, std::vector<double>(samples))};

  std::optional<QwCache> local_cache;
  std::vector<std::shared_ptr<const QwPropagator>> walks;
  if (spec.protocol == Protocol::msqw) {
    if (cache == nullptr) cache = &local_cache.emplace(problem.diag);
    for (double g : spec.gammas) walks.push_back(cache->get(g));
  }

  const StateVector plus = make_plus_state(problem.qubits());
  std::vector<Complex> amps(plus.dim());
  Eigen::MatrixXd scratch;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::vector<double> runtimes = sample_runtimes(spec.seed, s, p, spec.t_min, spec.t_max);
    std::copy(plus.amps().begin(), plus.amps().end(), amps.begin());
    for (std::size_t j = 0; j < p; ++j) {
      if (spec.protocol == Protocol::msqw) {
        walks[j]->apply_inplace(amps, runtimes[j], scratch);
      } else {
        const auto [alpha, beta] = map_gamma_to_qaoa(spec.gammas[j], runtimes[j]);
        phase_propagate_inplace(amps, problem.diag, beta);
        driver_propagate_inplace(amps, problem.qubits(), alpha);
      }
      if (all_stages || j + 1 == p) {
        const std::size_t row = all_stages ? j : 0;
        table.energy[row][s] = energy_of_amps(amps, problem.diag);
        table.prob[row][s] = success_of_amps(amps, problem.ground);
      }
    }
  }
  return table;
}

MetricSample summarize(const std::vector<double>& energy, const std::vector<double>& prob,
                       const TimeAverageSpec& spec) {
  const MeanSe e = mean_and_se(energy);
  const MeanSe pr = mean_and_se(prob);
  MetricSample m;
  m.energy = e.mean;
  m.energy_se = e.se;
  m.success_prob = pr.mean;
  m.prob_se = pr.se;
  m.samples = spec.samples;
  m.seed = spec.seed;
  m.protocol = spec.protocol;
  m.params = spec.gammas;
  return m;
}

}  // namespace

std::string to_string(Protocol p) { return p == Protocol::msqw ? "msqw" : "qaoa"; }
std::string to_string(DecayKind d) { return d == DecayKind::geometric ? "geometric" : "linear"; }

Protocol parse_protocol(const std::string& s) {
  if (s == "msqw" || s == "qw") return Protocol::msqw;
  if (s == "qaoa") return Protocol::qaoa;
  throw UsageError("unknown protocol '" + s + "' (expected msqw or qaoa)");
}

DecayKind parse_decay(const std::string& s) {
  if (s == "geometric") return DecayKind::geometric;
  if (s == "linear") return DecayKind::linear;
  throw UsageError("unknown decay '" + s + "' (expected geometric or linear)");
}

Problem Problem::from(SpinGlassInstance inst) {
  Problem p;
  p.diag = build_diagonal(inst);
  p.ground = solve_ground_state(p.diag, inst.id);
  p.instance = std::move(inst);
  return p;
}

void MsqwSchedule::validate() const {
  if (stages.empty()) throw UsageError("MSQW schedule needs at least one stage");
  for (const auto& s : stages) {
    if (!(s.gamma >= 0.0) || !(s.t >= 0.0) || !std::isfinite(s.gamma) || !std::isfinite(s.t)) {
      throw UsageError("MSQW stage needs finite gamma >= 0 and t >= 0");
    }
  }
}

void QaoaSchedule::validate() const {
  if (stages.empty()) throw UsageError("QAOA schedule needs at least one stage");
  for (const auto& s : stages) {
    if (!(s.alpha >= 0.0) || !(s.beta >= 0.0) || !std::isfinite(s.alpha) || !std::isfinite(s.beta)) {
      throw UsageError("QAOA stage needs finite alpha >= 0 and beta >= 0");
    }
  }
}

void HeuristicScheduleParams::validate() const {
  if (p < 1) throw UsageError("stage count p must be >= 1");
  if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) throw UsageError("gamma0 must be finite and >= 0");
  if (!(delta_gamma >= 0.0 && delta_gamma < 1.0)) throw UsageError("delta_gamma must lie in [0, 1)");
  if (!(t_min > 0.0 && t_min <= t_max)) throw UsageError("runtime window needs 0 < t_min <= t_max");
  if (samples < 1) throw UsageError("samples must be >= 1");
}

GammaSequence heuristic_gammas(const HeuristicScheduleParams& params) {
  params.validate();
  GammaSequence seq;
  seq.gammas.reserve(static_cast<std::size_t>(params.p));
  double g = params.gamma0;
  for (int k = 0; k < params.p; ++k) {
    if (params.decay == DecayKind::geometric) {
      seq.gammas.push_back(g);
      g *= 1.0 - params.delta_gamma;
    } else {
      // gamma0 = 0 has no finite step; the sequence stays at zero.
      double v = params.gamma0 == 0.0 ? 0.0 : params.gamma0 - k * params.delta_gamma / params.gamma0;
      if (v < 0.0) {
        v = 0.0;
        seq.clamped = true;
      }
      seq.gammas.push_back(v);
    }
  }
  return seq;
}

std::pair<double, double> map_gamma_to_qaoa(double gamma, double t) {
  if (!(gamma >= 0.0)) throw UsageError("map_gamma_to_qaoa: gamma must be >= 0");
  const double beta = t / (1.0 + gamma);
  return {gamma * beta, beta};
}

HeuristicSchedule build_heuristic_schedule(const HeuristicScheduleParams& params, const std::vector<double>& runtimes) {
  if (static_cast<int>(runtimes.size()) != params.p) {
    throw UsageError("build_heuristic_schedule: need exactly p runtimes");
  }
  HeuristicSchedule out;
  out.gammas = heuristic_gammas(params);
  for (std::size_t j = 0; j < runtimes.size(); ++j) {
    const double g = out.gammas.gammas[j];
    out.msqw.stages.push_back({g, runtimes[j]});
    const auto [alpha, beta] = map_gamma_to_qaoa(g, runtimes[j]);
    out.qaoa.stages.push_back({alpha, beta});
  }
  return out;
}

StateVector run_msqw(const DiagonalEnergies& diag, const MsqwSchedule& schedule, QwCache* cache) {
  schedule.validate();
  StateVector state = make_plus_state(diag.n);
  std::optional<QwCache> local;
  if (cache == nullptr) cache = &local.emplace(diag);
  Eigen::MatrixXd scratch;
  for (const auto& st : schedule.stages) cache->get(st.gamma)->apply_inplace(state.amps(), st.t, scratch);
  return state;
}

StateVector run_qaoa(const DiagonalEnergies& diag, const QaoaSchedule& schedule) {
  schedule.validate();
  StateVector state = make_plus_state(diag.n);
  for (const auto& st : schedule.stages) {
    phase_propagate_inplace(state.amps(), diag, st.beta);
    driver_propagate_inplace(state.amps(), state.qubits(), st.alpha);
  }
  return state;
}

MetricSample measure_metrics(const StateVector& state, const DiagonalEnergies& diag, const GroundStateRecord& gs) {
  if (state.dim() != diag.dim()) throw UsageError("measure_metrics: state and energy table sizes differ");
  MetricSample m;
  m.energy = energy_of_amps(state.amps(), diag);
  m.success_prob = success_of_amps(state.amps(), gs);
  return m;
}

void TimeAverageSpec::validate() const {
  if (gammas.empty()) throw UsageError("time averaging needs at least one stage");
  for (double g : gammas) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw UsageError("stage gamma must be finite and >= 0");
  }
  if (samples < 1) throw UsageError("samples must be >= 1");
  if (!(t_min > 0.0 && t_min <= t_max)) throw UsageError("runtime window needs 0 < t_min <= t_max");
}

std::vector<double> sample_runtimes(std::uint64_t seed, std::uint64_t index, std::size_t stages, double t_min,
                                    double t_max) {
  std::vector<double> ts(stages, t_min);
  if (t_min == t_max) return ts;
  std::mt19937_64 eng(splitmix64(seed ^ splitmix64(index)));
  std::uniform_real_distribution<double> uni(t_min, t_max);
  for (auto& t : ts) t = uni(eng);
  return ts;
}

MetricSample time_averaged_metrics(const Problem& problem, const TimeAverageSpec& spec, QwCache* cache) {
  const SampleTable table = run_samples(problem, spec, cache, false);
  return summarize(table.energy[0], table.prob[0], spec);
}

StageTrajectory time_averaged_trajectory(const Problem& problem, const TimeAverageSpec& spec, QwCache* cache) {
  const SampleTable table = run_samples(problem, spec, cache, true);
  StageTrajectory out;
  const std::size_t p = spec.gammas.size();
  for (std::size_t j = 0; j < p; ++j) {
    MetricSample m = summarize(table.energy[j], table.prob[j], spec);
    m.params.assign(spec.gammas.begin(), spec.gammas.begin() + static_cast<std::ptrdiff_t>(j + 1));
    out.after_stage.push_back(std::move(m));
  }
  for (std::size_t j = 0; j + 1 < p; ++j) {
    std::vector<double> diff(table.energy[j].size());
    for (std::size_t s = 0; s < diff.size(); ++s) diff[s] = table.energy[j + 1][s] - table.energy[j][s];
    const MeanSe d = mean_and_se(diff);
    out.energy_step_mean.push_back(d.mean);
    out.energy_step_se.push_back(d.se);
  }
  return out;
}

// ---- schedule files ----

std::string schedule_to_json(const ScheduleFile& s) {
  nlohmann::ordered_json j;
  j["protocol"] = to_string(s.protocol);
  j["decay"] = s.decay;
  j["gamma0"] = s.gamma0;
  j["delta_gamma"] = s.delta_gamma;
  j["p"] = s.p;
  auto stages = nlohmann::ordered_json::array();
  for (const auto& st : s.stages) stages.push_back({st[0], st[1]});
  j["stages"] = stages;
  return j.dump();
}

ScheduleFile schedule_from_json(const std::string& text) {
  ScheduleFile s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.protocol = parse_protocol(j.at("protocol").get<std::string>());
    s.decay = j.at("decay").get<std::string>();
    if (s.decay != "geometric" && s.decay != "linear" && s.decay != "explicit") {
      throw UsageError("unknown decay '" + s.decay + "'");
    }
    s.gamma0 = j.at("gamma0").get<double>();
    s.delta_gamma = j.at("delta_gamma").get<double>();
    s.p = j.at("p").get<int>();
    for (const auto& st : j.at("stages")) s.stages.push_back({st.at(0).get<double>(), st.at(1).get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed schedule JSON: ") + e.what());
  }
  if (static_cast<int>(s.stages.size()) != s.p) throw UsageError("schedule JSON: p does not match stage count");
  return s;
}

ScheduleFile schedule_file_for(const HeuristicScheduleParams& params, const HeuristicSchedule& sched,
                               Protocol protocol) {
  ScheduleFile f;
  f.protocol = protocol;
  f.decay = to_string(params.decay);
  f.gamma0 = params.gamma0;
  f.delta_gamma = params.delta_gamma;
  f.p = params.p;
  if (protocol == Protocol::msqw) {
    for (const auto& st : sched.msqw.stages) f.stages.push_back({st.gamma, st.t});
  } else {
    for (const auto& st : sched.qaoa.stages) f.stages.push_back({st.alpha, st.beta});
  }
  return f;
}

MsqwSchedule to_msqw(const ScheduleFile& s) {
  if (s.protocol != Protocol::msqw) throw UsageError("schedule file is not an MSQW schedule");
  MsqwSchedule m;
  for (const auto& st : s.stages) m.stages.push_back({st[0], st[1]});
  m.validate();
  return m;
}

QaoaSchedule to_qaoa(const ScheduleFile& s) {
  if (s.protocol != Protocol::qaoa) throw UsageError("schedule file is not a QAOA schedule");
  QaoaSchedule q;
  for (const auto& st : s.stages) q.stages.push_back({st[0], st[1]});
  q.validate();
  return q;
}

}  // namespace msqw
