#include "msqw/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "msqw/errors.hpp"
#include "msqw/parallel.hpp"

namespace msqw {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGlNodes{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                         0.9061798459386640};
constexpr std::array<double, 5> kGlWeights{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                           0.4786286704993665, 0.2369268850561891};

// Full-matrix spectral norm of a real symmetric matrix.
double symmetric_norm(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<std::pair<double, double>> segment_coefficients(const AnnealSchedule& schedule, int p) {
  if (p < 1) throw UsageError("segment count must be >= 1");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) out.push_back(interval_average(schedule, j, p));
  return out;
}

void require_dense(const DiagonalEnergies& diag) {
  if (diag.n > kMaxDenseQubits) throw ConfigError("scaling study needs n <= 8");
}

}  // namespace

GridAxis linspace_axis(std::string name, double lo, double hi, int points) {
  if (points < 1) throw UsageError("grid axis needs at least one point");
  GridAxis ax{std::move(name), {}};
  ax.values.resize(static_cast<std::size_t>(points));
  if (points == 1) {
    ax.values[0] = lo;
    return ax;
  }
  for (int k = 0; k < points; ++k) ax.values[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
  return ax;
}

std::size_t GridScanResult::argmin_energy() const {
  return static_cast<std::size_t>(std::min_element(energy.begin(), energy.end()) - energy.begin());
}

std::size_t GridScanResult::argmax_prob() const {
  return static_cast<std::size_t>(std::max_element(success_prob.begin(), success_prob.end()) - success_prob.begin());
}

GridScanResult scan_single_stage(const Problem& problem, Protocol protocol, const SingleStageGrid& grid,
                                 std::uint64_t seed, int threads) {
  GridScanResult r;
  r.protocol = protocol;
  r.stages = 1;
  r.instance_id = problem.instance.id;
  r.seed = seed;
  if (protocol == Protocol::msqw) {
    r.axis1 = linspace_axis("gamma", 0.0, grid.gamma_max, grid.points);
    r.axis2 = linspace_axis("t", 0.0, grid.t_max, grid.points);
  } else {
    r.axis1 = linspace_axis("alpha", 0.0, grid.alpha_max, grid.points);
    r.axis2 = linspace_axis("beta", 0.0, grid.beta_max, grid.points);
  }
  const std::size_t rows = r.axis1.values.size();
  const std::size_t cols = r.axis2.values.size();
  r.energy.assign(rows * cols, 0.0);
  r.success_prob.assign(rows * cols, 0.0);
  r.energy_se.assign(rows * cols, 0.0);
  r.prob_se.assign(rows * cols, 0.0);
  const StateVector plus = make_plus_state(problem.qubits());

  parallel_for(rows, threads, [&](std::size_t i) {
    const double a1 = r.axis1.values[i];
    std::optional<QwPropagator> walk;
    if (protocol == Protocol::msqw) walk.emplace(problem.diag, a1, 1.0);
    Eigen::MatrixXd scratch;
    for (std::size_t j = 0; j < cols; ++j) {
      const double a2 = r.axis2.values[j];
      StateVector psi = plus;
      if (walk) {
        walk->apply_inplace(psi.amps(), a2, scratch);
      } else {
        psi = run_qaoa(problem.diag, QaoaSchedule{{{a1, a2}}});
      }
      const MetricSample m = measure_metrics(psi, problem.diag, problem.ground);
      r.energy[r.index(i, j)] = m.energy;
      r.success_prob[r.index(i, j)] = m.success_prob;
    }
  });
  return r;
}

DominanceReport dominance_study(const std::vector<Problem>& problems, const SingleStageGrid& grid, int threads) {
  if (problems.size() < 2) throw UsageError("dominance study needs at least two instances");
  DominanceReport rep;
  rep.rows.resize(problems.size());
  parallel_for(problems.size(), threads, [&](std::size_t k) {
    const auto qw = scan_single_stage(problems[k], Protocol::msqw, grid);
    const auto qaoa = scan_single_stage(problems[k], Protocol::qaoa, grid);
    rep.rows[k] = {problems[k].instance.id, qw.min_energy(), qaoa.min_energy(), qw.max_prob(), qaoa.max_prob()};
  });
  for (const auto& row : rep.rows) {
    rep.qw_energy_wins += row.qw_wins_energy();
    rep.qw_prob_wins += row.qw_wins_prob();
    rep.qw_both_wins += row.qw_wins_energy() && row.qw_wins_prob();
  }
  return rep;
}

std::vector<double> multistage_gammas(int p, DecayKind decay, double axis1, double axis2) {
  if (p < 2) throw UsageError("multistage scans need p >= 2");
  if (p == 2) return {axis1, axis2};
  HeuristicScheduleParams hp;
  hp.gamma0 = axis1;
  hp.delta_gamma = axis2;
  hp.p = p;
  hp.decay = decay;
  return heuristic_gammas(hp).gammas;
}

GridScanResult scan_multistage(const Problem& problem, Protocol protocol, int p, const MultistageGrid& grid,
                               std::uint64_t seed, int threads) {
  if (p < 2) throw UsageError("multistage scans need p >= 2");
  GridScanResult r;
  r.protocol = protocol;
  r.stages = p;
  r.instance_id = problem.instance.id;
  r.seed = seed;
  r.samples = grid.samples;
  if (p == 2) {
    r.axis1 = linspace_axis("gamma1", 0.0, grid.gamma_max, grid.points);
    r.axis2 = linspace_axis("gamma2", 0.0, grid.gamma_max, grid.points);
  } else {
    r.decay = to_string(grid.decay);
    r.axis1 = linspace_axis("gamma", 0.0, grid.gamma_max, grid.points);
    r.axis2 = linspace_axis("dgamma", 0.0, grid.dgamma_max, grid.points);
  }
  const std::size_t cells = r.axis1.values.size() * r.axis2.values.size();
  r.energy.assign(cells, 0.0);
  r.success_prob.assign(cells, 0.0);
  r.energy_se.assign(cells, 0.0);
  r.prob_se.assign(cells, 0.0);

  // p = 2 only ever sees the axis values, so one cache serves the whole grid.
  QwCache shared(problem.diag);
  parallel_for(cells, threads, [&](std::size_t cell) {
    const std::size_t i = cell / r.axis2.values.size();
    const std::size_t j = cell % r.axis2.values.size();
    TimeAverageSpec spec;
    spec.protocol = protocol;
    spec.gammas = multistage_gammas(p, grid.decay, r.axis1.values[i], r.axis2.values[j]);
    spec.t_min = grid.t_min;
    spec.t_max = grid.t_max;
    spec.samples = grid.samples;
    spec.seed = seed;
    const MetricSample m = time_averaged_metrics(problem, spec, p == 2 ? &shared : nullptr);
    r.energy[cell] = m.energy;
    r.success_prob[cell] = m.success_prob;
    r.energy_se[cell] = m.energy_se;
    r.prob_se[cell] = m.prob_se;
  });
  return r;
}

std::pair<double, double> interval_average(const AnnealSchedule& schedule, int j, int p) {
  const double s0 = static_cast<double>(j) / p;
  const double s1 = static_cast<double>(j + 1) / p;
  const double half = 0.5 * (s1 - s0);
  const double mid = 0.5 * (s1 + s0);
  double a = 0.0;
  double b = 0.0;
  for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
    const double s = mid + half * kGlNodes[k];
    a += kGlWeights[k] * schedule.a_fn(s);
    b += kGlWeights[k] * schedule.b_fn(s);
  }
  // weights sum to 2 on [-1, 1]
  return {0.5 * a, 0.5 * b};
}

DenseUnitary qaoa1_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule, int p) {
  require_dense(diag);
  const auto coeffs = segment_coefficients(schedule, p);
  const double dt = schedule.t_total / p;
  return build_dense_unitary(diag.n, [&](const StateVector& in) {
    StateVector s = in;
    for (const auto& [a, b] : coeffs) {
      phase_propagate_inplace(s.amps(), diag, b * dt);
      driver_propagate_inplace(s.amps(), s.qubits(), a * dt);
    }
    return s;
  });
}

DenseUnitary qaoa2_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule, int p) {
  require_dense(diag);
  const auto coeffs = segment_coefficients(schedule, p);
  const double dt = schedule.t_total / p;
  return build_dense_unitary(diag.n, [&](const StateVector& in) {
    StateVector s = in;
    for (const auto& [a, b] : coeffs) {
      driver_propagate_inplace(s.amps(), s.qubits(), 0.5 * a * dt);
      phase_propagate_inplace(s.amps(), diag, b * dt);
      driver_propagate_inplace(s.amps(), s.qubits(), 0.5 * a * dt);
    }
    return s;
  });
}

DenseUnitary msqw_unitary(const DiagonalEnergies& diag, const AnnealSchedule& schedule, int p) {
  require_dense(diag);
  const auto coeffs = segment_coefficients(schedule, p);
  const double dt = schedule.t_total / p;
  const auto dim = static_cast<Eigen::Index>(diag.dim());
  DenseUnitary u{diag.n, Eigen::MatrixXcd::Identity(dim, dim)};
  for (const auto& [a, b] : coeffs) u.entries = QwPropagator(diag, a, b).unitary(dt) * u.entries;
  return u;
}

double fit_loglog_slope(const std::vector<int>& p_values, const std::vector<double>& errs) {
  if (p_values.size() != errs.size()) throw UsageError("fit_loglog_slope: length mismatch");
  std::vector<std::size_t> order(p_values.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return p_values[x] < p_values[y]; });
  const std::size_t keep = (order.size() + 1) / 2;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = order.size() - keep; k < order.size(); ++k) {
    const std::size_t idx = order[k];
    if (!(errs[idx] >= 1e-10)) continue;
    xs.push_back(std::log2(static_cast<double>(p_values[idx])));
    ys.push_back(std::log2(errs[idx]));
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

std::pair<double, double> schedule_norms(const DiagonalEnergies& diag, const AnnealSchedule& schedule) {
  constexpr int kGrid = 1001;
  const double dt = schedule.t_total / (kGrid - 1);
  double h_max = 0.0;
  double hdot_max = 0.0;
  Eigen::MatrixXd prev;
  for (int k = 0; k < kGrid; ++k) {
    const double t = k * dt;
    Eigen::MatrixXd h = hamiltonian_matrix(diag, schedule.a_at_time(t), schedule.b_at_time(t));
    h_max = std::max(h_max, symmetric_norm(h));
    if (k > 0 && dt > 0.0) hdot_max = std::max(hdot_max, symmetric_norm((h - prev) / dt));
    prev = std::move(h);
  }
  return {h_max, hdot_max};
}

double commutator_norm(const DiagonalEnergies& diag) {
  const Eigen::MatrixXd hd = hamiltonian_matrix(diag, 1.0, 0.0);
  const Eigen::MatrixXd hp = hamiltonian_matrix(diag, 0.0, 1.0);
  const Eigen::MatrixXd c = hd * hp - hp * hd;
  return spectral_norm(c.cast<Complex>());
}

ScalingReport scaling_study(const Problem& problem, const std::vector<int>& p_values, const AnnealSchedule& schedule,
                            const std::set<ScalingMethod>& methods, double reference_tol) {
  require_dense(problem.diag);
  if (p_values.empty()) throw UsageError("scaling study needs at least one p value");
  ScalingReport rep;
  rep.n = problem.qubits();
  rep.instance_id = problem.instance.id;
  rep.seed = problem.instance.seed;
  rep.schedule_name = schedule.name;
  rep.t_total = schedule.t_total;
  rep.p_values = p_values;
  rep.methods = methods;

  const AnnealReference ref = converged_anneal_unitary(problem.diag, schedule, reference_tol);
  rep.reference_steps = ref.steps;
  rep.reference_change = ref.last_change;

  auto record = [&](const DenseUnitary& u, std::vector<double>& err, std::vector<double>& coarse) {
    err.push_back(spectral_norm(ref.unitary.entries - u.entries));
    coarse.push_back(spectral_norm(ref.coarser - u.entries));
  };
  for (int p : p_values) {
    if (p < 1) throw UsageError("p values must be >= 1");
    if (methods.contains(ScalingMethod::qaoa1)) {
      record(qaoa1_unitary(problem.diag, schedule, p), rep.err_qaoa1, rep.err_qaoa1_coarse);
    }
    if (methods.contains(ScalingMethod::qaoa2)) {
      record(qaoa2_unitary(problem.diag, schedule, p), rep.err_qaoa2, rep.err_qaoa2_coarse);
    }
    if (methods.contains(ScalingMethod::msqw)) {
      record(msqw_unitary(problem.diag, schedule, p), rep.err_msqw, rep.err_msqw_coarse);
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.slope_qaoa1 = rep.err_qaoa1.empty() ? nan : fit_loglog_slope(p_values, rep.err_qaoa1);
  rep.slope_qaoa2 = rep.err_qaoa2.empty() ? nan : fit_loglog_slope(p_values, rep.err_qaoa2);
  rep.slope_msqw = rep.err_msqw.empty() ? nan : fit_loglog_slope(p_values, rep.err_msqw);
  std::tie(rep.h_max, rep.hdot_max) = schedule_norms(problem.diag, schedule);
  rep.commutator_norm = commutator_norm(problem.diag);
  return rep;
}

std::vector<ProfileRow> emit_schedule_profile(const HeuristicScheduleParams& params) {
  const GammaSequence seq = heuristic_gammas(params);
  std::vector<ProfileRow> rows;
  rows.reserve(seq.gammas.size());
  for (std::size_t j = 0; j < seq.gammas.size(); ++j) {
    const auto [alpha, beta] = map_gamma_to_qaoa(seq.gammas[j], 1.0);
    rows.push_back({static_cast<int>(j + 1), seq.gammas[j], alpha, beta});
  }
  return rows;
}

ProfileShape analyze_profile(const std::vector<ProfileRow>& rows) {
  ProfileShape shape;
  shape.alpha_strictly_decreasing = true;
  shape.beta_strictly_increasing = true;
  for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
    const auto& cur = rows[j];
    const auto& nxt = rows[j + 1];
    if (!(nxt.alpha_over_t < cur.alpha_over_t)) shape.alpha_strictly_decreasing = false;
    const bool beta_up = nxt.beta_over_t > cur.beta_over_t ||
                         (nxt.beta_over_t == cur.beta_over_t && nxt.alpha_over_t < cur.alpha_over_t);
    if (!beta_up) shape.beta_strictly_increasing = false;
  }
  int last_sign = 0;
  for (const auto& r : rows) {
    const double d = r.alpha_over_t - r.beta_over_t;
    const int sign = (d > 0) - (d < 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++shape.crossings;
    last_sign = sign;
  }
  return shape;
}

}  // namespace msqw
