#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "msqw/errors.hpp"
#include "msqw/experiment.hpp"
#include "msqw/report.hpp"
#include "oracles.hpp"

using namespace msqw;
using oracle::Complex;

namespace {

void check_grid_bounds(const GridScanResult& r, const Problem& prob) {
  REQUIRE(r.energy.size() == r.axis1.values.size() * r.axis2.values.size());
  REQUIRE(r.success_prob.size() == r.energy.size());
  for (std::size_t k = 0; k < r.energy.size(); ++k) {
    CHECK(r.energy[k] >= prob.ground.e0 - 1e-9);
    CHECK(r.success_prob[k] >= 0.0);
    CHECK(r.success_prob[k] <= 1.0 + 1e-12);
  }
}

}  // namespace

TEST_CASE("linspace_axis") {
  const auto ax = linspace_axis("t", 0.0, 6.0, 20);
  REQUIRE(ax.values.size() == 20);
  CHECK(ax.values.front() == 0.0);
  CHECK(ax.values.back() == 6.0);
  CHECK(ax.values[1] == doctest::Approx(6.0 / 19));
  CHECK(linspace_axis("x", 2.0, 5.0, 1).values == std::vector<double>{2.0});
  CHECK_THROWS_AS(linspace_axis("x", 0, 1, 0), UsageError);
}

TEST_CASE("scan_single_stage") {
  const auto prob = Problem::from(generate_instance(4, 40));
  const SingleStageGrid grid{7};
  const double uniform = prob.ground.degeneracy / 16.0;

  SUBCASE("QAOA with no driver angle leaves |s> probabilities") {
    const auto r = scan_single_stage(prob, Protocol::qaoa, grid);
    check_grid_bounds(r, prob);
    CHECK(r.axis1.name == "alpha");
    CHECK(r.axis2.name == "beta");
    for (std::size_t j = 0; j < r.axis2.values.size(); ++j) {
      CHECK(std::abs(r.energy[r.index(0, j)]) < 1e-12);
      CHECK(r.success_prob[r.index(0, j)] == doctest::Approx(uniform).epsilon(1e-12));
    }
  }
  SUBCASE("QW at zero time is the identity") {
    const auto r = scan_single_stage(prob, Protocol::msqw, grid);
    check_grid_bounds(r, prob);
    CHECK(r.axis1.name == "gamma");
    CHECK(r.axis2.name == "t");
    for (std::size_t i = 0; i < r.axis1.values.size(); ++i) {
      CHECK(std::abs(r.energy[r.index(i, 0)]) < 1e-12);
      CHECK(r.success_prob[r.index(i, 0)] == doctest::Approx(uniform).epsilon(1e-12));
    }
    CHECK(r.min_energy() == r.energy[r.argmin_energy()]);
    for (double e : r.energy) CHECK(r.min_energy() <= e);
    for (double p : r.success_prob) CHECK(r.max_prob() >= p);
  }
  SUBCASE("thread count does not change the result") {
    const auto a = scan_single_stage(prob, Protocol::msqw, grid, 0, 1);
    const auto b = scan_single_stage(prob, Protocol::msqw, grid, 0, 3);
    CHECK(a.energy == b.energy);
    CHECK(a.success_prob == b.success_prob);
    CHECK(grid_csv(a) == grid_csv(b));
  }
}

TEST_CASE("single-stage walk beats single-stage QAOA on a 10-qubit instance") {
  const auto prob = Problem::from(generate_instance(10, 2024));
  const auto qw = scan_single_stage(prob, Protocol::msqw, {}, 0, 2);
  const auto qaoa = scan_single_stage(prob, Protocol::qaoa, {}, 0, 2);
  MESSAGE("best energy qw " << qw.min_energy() << " qaoa " << qaoa.min_energy() << " e0 " << prob.ground.e0);
  CHECK(qw.min_energy() < qaoa.min_energy());
}

TEST_CASE("dominance_study") {
  const auto p = Problem::from(generate_instance(4, 7));
  const auto rep = dominance_study({p, p}, SingleStageGrid{6});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].qw_best_energy == rep.rows[1].qw_best_energy);
  CHECK(rep.rows[0].qaoa_best_energy == rep.rows[1].qaoa_best_energy);
  CHECK(rep.rows[0].qw_best_prob == rep.rows[1].qw_best_prob);
  CHECK(rep.rows[0].qaoa_best_prob == rep.rows[1].qaoa_best_prob);
  CHECK(rep.qw_both_wins <= std::min(rep.qw_energy_wins, rep.qw_prob_wins));
  CHECK_THROWS_AS(dominance_study({p}, SingleStageGrid{6}), UsageError);

  SUBCASE("a 40x40 grid agrees with the 20x20 optimum to within the coarse spacing") {
    const auto coarse = scan_single_stage(p, Protocol::msqw, {});
    const auto fine = scan_single_stage(p, Protocol::msqw, SingleStageGrid{40});
    // Largest change of the metric between the coarse optimum and its grid neighbours.
    const std::size_t n1 = coarse.axis1.values.size(), n2 = coarse.axis2.values.size();
    const std::size_t best = coarse.argmax_prob();
    const long bi = static_cast<long>(best / n2), bj = static_cast<long>(best % n2);
    double spread = 0.0;
    for (long di = -1; di <= 1; ++di) {
      for (long dj = -1; dj <= 1; ++dj) {
        const long i = bi + di, j = bj + dj;
        if (i < 0 || j < 0 || i >= static_cast<long>(n1) || j >= static_cast<long>(n2)) continue;
        spread = std::max(spread, std::abs(coarse.success_prob[best] -
                                           coarse.success_prob[coarse.index(static_cast<std::size_t>(i),
                                                                            static_cast<std::size_t>(j))]));
      }
    }
    MESSAGE("coarse " << coarse.max_prob() << " fine " << fine.max_prob() << " spread " << spread);
    CHECK(fine.max_prob() >= coarse.max_prob() - spread);
    CHECK(std::abs(fine.max_prob() - coarse.max_prob()) <= spread);
  }
}

TEST_CASE("multistage_gammas") {
  CHECK(multistage_gammas(2, DecayKind::geometric, 1.5, 0.5) == std::vector<double>{1.5, 0.5});
  const auto g = multistage_gammas(5, DecayKind::geometric, 4.0, 0.2);
  REQUIRE(g.size() == 5);
  CHECK(g[4] == doctest::Approx(1.6384));
  CHECK_THROWS_AS(multistage_gammas(1, DecayKind::geometric, 1.0, 0.1), UsageError);
}

TEST_CASE("scan_multistage") {
  const auto prob = Problem::from(generate_instance(5, 50));

  SUBCASE("two stages at zero hopping rate keep zero energy") {
    const auto r = scan_multistage(prob, Protocol::msqw, 2, MultistageGrid{3, 4.0, 0.5, DecayKind::geometric, 0.1, 0.5, 50}, 1);
    check_grid_bounds(r, prob);
    CHECK(std::abs(r.energy[r.index(0, 0)]) < 1e-10);
    CHECK(r.samples == 50);
  }

  SUBCASE("equal two-stage rates match one stage with the summed runtime") {
    const double tmin = 0.1, tmax = 0.5;
    const int samples = 400;
    for (double gamma : {0.4, 1.1, 1.9, 2.6, 3.7}) {
      const auto two = time_averaged_metrics(prob, {Protocol::msqw, {gamma, gamma}, tmin, tmax, samples, 5});
      std::vector<double> e(samples);
      for (int s = 0; s < samples; ++s) {
        const auto rt = sample_runtimes(5, static_cast<std::uint64_t>(s), 2, tmin, tmax);
        e[static_cast<std::size_t>(s)] =
            measure_metrics(run_msqw(prob.diag, {{{gamma, rt[0] + rt[1]}}}), prob.diag, prob.ground).energy;
      }
      double mean = 0.0;
      for (double x : e) mean += x;
      mean /= samples;
      CHECK(std::abs(two.energy - mean) <= 3 * two.energy_se);
      CHECK(std::abs(two.energy - mean) < 1e-9);
    }
  }

  SUBCASE("five stages: 2000 vs 4000 samples agree pointwise") {
    const MultistageGrid g2000{4, 4.0, 0.5, DecayKind::geometric, 0.1, 0.5, 2000};
    MultistageGrid g4000 = g2000;
    g4000.samples = 4000;
    const auto a = scan_multistage(prob, Protocol::msqw, 5, g2000, 17);
    const auto b = scan_multistage(prob, Protocol::msqw, 5, g4000, 18);
    for (std::size_t k = 0; k < a.energy.size(); ++k) {
      CHECK(std::abs(a.energy[k] - b.energy[k]) <= 3 * std::hypot(a.energy_se[k], b.energy_se[k]) + 1e-12);
      CHECK(std::abs(a.success_prob[k] - b.success_prob[k]) <= 3 * std::hypot(a.prob_se[k], b.prob_se[k]) + 1e-12);
    }
  }

  SUBCASE("rerun is bit-identical") {
    const MultistageGrid g{3, 4.0, 0.5, DecayKind::linear, 0.1, 0.5, 100};
    CHECK(grid_csv(scan_multistage(prob, Protocol::qaoa, 3, g, 2)) == grid_csv(scan_multistage(prob, Protocol::qaoa, 3, g, 2)));
  }
}

TEST_CASE("segment averages and per-segment unitaries") {
  const auto lin = AnnealSchedule::linear(2.0);
  for (int j = 0; j < 4; ++j) {
    const auto [a, b] = interval_average(lin, j, 4);
    CHECK(a == doctest::Approx(1.0 - (j + 0.5) / 4).epsilon(1e-14));
    CHECK(b == doctest::Approx((j + 0.5) / 4).epsilon(1e-14));
  }
  const auto quad = AnnealSchedule{[](double s) { return s * s; }, [](double) { return 1.0; }, 1.0, "quad"};
  CHECK(interval_average(quad, 1, 2).first == doctest::Approx(7.0 / 12).epsilon(1e-14));

  const auto inst = generate_instance(3, 61);
  const auto diag = build_diagonal(inst);
  const oracle::Mat hd = oracle::driver_matrix(3), hp = oracle::problem_matrix(inst);
  const Complex i{0.0, 1.0};
  const auto sched = AnnealSchedule::constant(0.7, 1.2, 1.5);

  const oracle::Mat d = oracle::expm_taylor(-i * 0.7 * 1.5 * hd), ph = oracle::expm_taylor(-i * 1.2 * 1.5 * hp);
  const oracle::Mat half = oracle::expm_taylor(-i * 0.35 * 1.5 * hd);
  CHECK((qaoa1_unitary(diag, sched, 1).entries - d * ph).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((qaoa2_unitary(diag, sched, 1).entries - half * ph * half).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((msqw_unitary(diag, sched, 1).entries - oracle::expm_taylor(-i * 1.5 * (0.7 * hd + 1.2 * hp)))
            .cwiseAbs()
            .maxCoeff() < 1e-10);

  const oracle::Mat comm = hd * hp - hp * hd;
  CHECK(commutator_norm(diag) == doctest::Approx(oracle::power_iteration_norm(comm)).epsilon(1e-8));

  const auto [hmax, hdot] = schedule_norms(diag, lin);
  CHECK(hdot == doctest::Approx(oracle::power_iteration_norm(hp - hd) / 2.0).epsilon(1e-6));
  CHECK(hmax >= 3.0 - 1e-12);
  CHECK(hmax >= oracle::power_iteration_norm(hp) - 1e-9);
}

TEST_CASE("fit_loglog_slope") {
  const std::vector<int> ps{4, 8, 16, 32, 64, 128};
  std::vector<double> e2, e1;
  for (int p : ps) {
    e2.push_back(3.0 / (p * p));
    e1.push_back(0.5 / p + (p < 16 ? 1.0 : 0.0));
  }
  CHECK(fit_loglog_slope(ps, e2) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit_loglog_slope(ps, e1) == doctest::Approx(-1.0).epsilon(1e-12));
  std::vector<double> floor = e2;
  floor[5] = 1e-12;
  CHECK(fit_loglog_slope(ps, floor) == doctest::Approx(-2.0).epsilon(1e-12));
  floor[4] = 1e-13;
  CHECK(std::isnan(fit_loglog_slope(ps, floor)));
  CHECK_THROWS_AS(fit_loglog_slope(ps, {1.0}), UsageError);
}

TEST_CASE("scaling_study") {
  SUBCASE("constant Hamiltonian makes the walk exact") {
    const auto prob = Problem::from(generate_instance(3, 70));
    const auto rep = scaling_study(prob, {1, 2, 4, 8}, AnnealSchedule::constant(0.8, 1.0, 2.0), {ScalingMethod::msqw});
    for (double e : rep.err_msqw) CHECK(e <= 1e-9);
    CHECK(rep.err_qaoa1.empty());
  }
  SUBCASE("reference doubling moves every error by under one percent") {
    const auto prob = Problem::from(generate_instance(4, 71));
    const auto rep = scaling_study(prob, {4, 8, 16, 32}, AnnealSchedule::linear(2.0));
    REQUIRE(rep.err_qaoa1.size() == 4);
    CHECK(rep.reference_change < 1e-8);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(rep.err_qaoa1[k] >= 0.0);
      CHECK(std::abs(rep.err_qaoa1[k] - rep.err_qaoa1_coarse[k]) < 0.01 * rep.err_qaoa1[k]);
      CHECK(std::abs(rep.err_qaoa2[k] - rep.err_qaoa2_coarse[k]) < 0.01 * rep.err_qaoa2[k]);
      CHECK(std::abs(rep.err_msqw[k] - rep.err_msqw_coarse[k]) < 0.01 * rep.err_msqw[k]);
      CHECK(rep.err_msqw[k] < rep.err_qaoa1[k]);
    }
    for (std::size_t k = 1; k < 4; ++k) {
      CHECK(rep.err_qaoa1[k] <= rep.err_qaoa1[k - 1]);
      CHECK(rep.err_qaoa2[k] <= rep.err_qaoa2[k - 1]);
      CHECK(rep.err_msqw[k] <= rep.err_msqw[k - 1]);
    }
    const auto csv = scaling_csv(rep);
    CHECK(csv.rfind("p,err_qaoa1,err_qaoa2,err_msqw\n", 0) == 0);
  }
  SUBCASE("errors") {
    const auto big = Problem::from(generate_instance(9, 1));
    CHECK_THROWS_AS(scaling_study(big, {4}, AnnealSchedule::linear(1.0)), ConfigError);
    const auto small = Problem::from(generate_instance(3, 1));
    CHECK_THROWS_AS(scaling_study(small, {}, AnnealSchedule::linear(1.0)), UsageError);
    CHECK_THROWS_AS(scaling_study(small, {4}, AnnealSchedule::linear(1.0), {ScalingMethod::msqw}, 1e-30),
                    ReferenceNotConverged);
  }
}

TEST_CASE("schedule profile") {
  const auto rows = emit_schedule_profile({3.0, 0.2, 5, DecayKind::geometric});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].stage == 1);
  CHECK(rows[0].alpha_over_t == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(rows[0].beta_over_t == doctest::Approx(0.25).epsilon(1e-14));

  const auto flat = emit_schedule_profile({2.0, 0.0, 10, DecayKind::geometric});
  for (const auto& r : flat) {
    CHECK(r.alpha_over_t == flat[0].alpha_over_t);
    CHECK(r.beta_over_t == flat[0].beta_over_t);
  }
  const auto flat_shape = analyze_profile(flat);
  CHECK_FALSE(flat_shape.alpha_strictly_decreasing);
  CHECK(flat_shape.crossings == 0);

  const auto long_rows = emit_schedule_profile({20.0, 0.3, 200, DecayKind::geometric});
  REQUIRE(long_rows.size() == 200);
  const auto shape = analyze_profile(long_rows);
  CHECK(shape.alpha_strictly_decreasing);
  CHECK(shape.beta_strictly_increasing);
  CHECK(shape.crossings == 1);
  for (const auto& r : long_rows) CHECK(r.alpha_over_t + r.beta_over_t == doctest::Approx(1.0).epsilon(1e-15));

  const auto csv = profile_csv(long_rows);
  CHECK(csv.rfind("stage,gamma,alpha_over_t,beta_over_t\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 201);
}

TEST_CASE("grid CSV layout") {
  const auto prob = Problem::from(generate_instance(3, 3));
  const auto r = scan_single_stage(prob, Protocol::qaoa, SingleStageGrid{3});
  const auto csv = grid_csv(r);
  CHECK(csv.rfind("axis1,axis2,energy,success_prob\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  CHECK(csv == grid_csv(scan_single_stage(prob, Protocol::qaoa, SingleStageGrid{3})));
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(std::numbers::pi)) == std::numbers::pi);
}
