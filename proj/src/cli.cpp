#include "msqw/cli.hpp"

#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "msqw/errors.hpp"
#include "msqw/experiment.hpp"
#include "msqw/parallel.hpp"
#include "msqw/report.hpp"

namespace msqw::cli {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string in;
  std::string out;
  std::size_t index = 0;
  int n = 5;
  int count = 1;
  std::uint64_t seed = 0;
  std::string protocol = "msqw";
  int stages = 1;
  int grid_points = 20;
  double gamma_max = 4.0;
  double t_max = 6.0;
  double alpha_max = std::numbers::pi / 2;
  double beta_max = std::numbers::pi / 2;
  std::string decay = "geometric";
  double gamma0 = 1.0;
  double dgamma = 0.5;
  double tmin = 0.1;
  double tmax = 0.5;
  int samples = 2000;
  std::string pvals = "4,8,16,32,64,128";
  double t_total = 2.0;
  int threads = 1;
};

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  if (c.command == "gen") {
    j["n"] = c.n;
    j["count"] = c.count;
    j["seed"] = c.seed;
  } else if (c.command == "solve") {
    j["in"] = c.in;
  } else if (c.command == "scan") {
    j["in"] = c.in;
    j["index"] = c.index;
    j["protocol"] = c.protocol;
    j["stages"] = c.stages;
    j["grid_points"] = c.grid_points;
    if (c.stages == 1) {
      j["gamma_max"] = c.gamma_max;
      j["t_max"] = c.t_max;
      j["alpha_max"] = c.alpha_max;
      j["beta_max"] = c.beta_max;
    } else {
      j["gamma_max"] = c.gamma_max;
      j["decay"] = c.decay;
      j["dgamma_max"] = c.dgamma;
      j["tmin"] = c.tmin;
      j["tmax"] = c.tmax;
      j["samples"] = c.samples;
    }
    j["seed"] = c.seed;
  } else if (c.command == "compare") {
    j["in"] = c.in;
    j["grid_points"] = c.grid_points;
    j["gamma_max"] = c.gamma_max;
    j["t_max"] = c.t_max;
    j["alpha_max"] = c.alpha_max;
    j["beta_max"] = c.beta_max;
  } else if (c.command == "scaling") {
    j["in"] = c.in;
    j["index"] = c.index;
    j["pvals"] = c.pvals;
    j["schedule"] = "linear";
    j["t_total"] = c.t_total;
  } else if (c.command == "profile") {
    j["stages"] = c.stages;
    j["gamma0"] = c.gamma0;
    j["dgamma"] = c.dgamma;
    j["decay"] = c.decay;
  }
  return j;
}

Json envelope(const RunConfig& c, Json result) {
  Json j;
  j["tool"] = kToolVersion;
  j["config"] = config_json(c);
  j["result"] = std::move(result);
  return j;
}

std::vector<int> parse_pvals(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--pvals: '" + tok + "' is not a positive integer");
    }
  }
  if (out.empty()) throw UsageError("--pvals: empty list");
  return out;
}

Problem load_solved(const RunConfig& c, std::size_t index) {
  auto recs = read_instances(c.in);
  if (index >= recs.size()) {
    throw UsageError("instance index " + std::to_string(index) + " out of range for " + c.in + " (" +
                     std::to_string(recs.size()) + " instances)");
  }
  auto& rec = recs[index];
  if (!rec.ground) {
    throw std::runtime_error("instance " + rec.instance.id + " in " + c.in + " has no ground state; run solve first");
  }
  return Problem::from(std::move(rec.instance));
}

std::vector<Problem> load_all_solved(const RunConfig& c) {
  auto recs = read_instances(c.in);
  std::vector<Problem> out;
  out.reserve(recs.size());
  for (auto& rec : recs) {
    if (!rec.ground) {
      throw std::runtime_error("instance " + rec.instance.id + " in " + c.in + " has no ground state; run solve first");
    }
    out.push_back(Problem::from(std::move(rec.instance)));
  }
  return out;
}

std::string sidecar(const std::string& out, const char* suffix) { return out + suffix; }

void cmd_gen(const RunConfig& c, std::ostream& log) {
  if (c.count < 1) throw UsageError("--count must be >= 1");
  std::vector<InstanceRecord> recs;
  for (int k = 0; k < c.count; ++k) recs.push_back({generate_instance(c.n, c.seed + static_cast<std::uint64_t>(k)), {}});
  write_instances(c.out, recs);
  log << "wrote " << recs.size() << " instances to " << c.out << '\n';
}

void cmd_solve(const RunConfig& c, std::ostream& log) {
  auto recs = read_instances(c.in);
  std::vector<InstanceRecord> solved(recs.size());
  parallel_for(recs.size(), c.threads, [&](std::size_t k) {
    solved[k].instance = recs[k].instance;
    solved[k].ground = solve_ground_state(build_diagonal(recs[k].instance), recs[k].instance.id);
  });
  const std::string out = c.out.empty() ? c.in : c.out;
  write_instances(out, solved);
  log << "solved " << solved.size() << " instances into " << out << '\n';
}

void cmd_scan(const RunConfig& c, std::ostream& log) {
  const Protocol protocol = parse_protocol(c.protocol);
  if (c.stages < 1) throw UsageError("--stages must be >= 1");
  if (c.grid_points < 1) throw UsageError("--grid-points must be >= 1");
  const Problem problem = load_solved(c, c.index);
  GridScanResult r;
  if (c.stages == 1) {
    SingleStageGrid g{c.grid_points, c.gamma_max, c.t_max, c.alpha_max, c.beta_max};
    r = scan_single_stage(problem, protocol, g, c.seed, c.threads);
  } else {
    MultistageGrid g{c.grid_points, c.gamma_max, c.dgamma, parse_decay(c.decay), c.tmin, c.tmax, c.samples};
    if (!(g.t_min > 0.0 && g.t_min <= g.t_max)) throw UsageError("need 0 < --tmin <= --tmax");
    if (g.samples < 1) throw UsageError("--samples must be >= 1");
    if (c.stages >= 3 && !(g.dgamma_max >= 0.0 && g.dgamma_max < 1.0)) {
      throw UsageError("--dgamma must lie in [0, 1)");
    }
    r = scan_multistage(problem, protocol, c.stages, g, c.seed, c.threads);
  }
  write_text_file(c.out, grid_csv(r));
  write_text_file(sidecar(c.out, ".summary.json"), envelope(c, grid_summary(r)).dump(2) + "\n");
  log << "scan " << to_string(protocol) << " p=" << c.stages << ": min energy " << r.min_energy()
      << ", max success probability " << r.max_prob() << '\n';
}

void cmd_compare(const RunConfig& c, std::ostream& log) {
  const auto problems = load_all_solved(c);
  SingleStageGrid g{c.grid_points, c.gamma_max, c.t_max, c.alpha_max, c.beta_max};
  const DominanceReport rep = dominance_study(problems, g, c.threads);
  write_text_file(c.out, dominance_csv(rep));
  write_text_file(sidecar(c.out, ".summary.json"), envelope(c, dominance_summary(rep)).dump(2) + "\n");
  log << "QW wins energy on " << rep.qw_energy_wins << '/' << rep.rows.size() << ", probability on "
      << rep.qw_prob_wins << '/' << rep.rows.size() << ", both on " << rep.qw_both_wins << '\n';
}

void cmd_scaling(const RunConfig& c, std::ostream& log) {
  const std::vector<int> pvals = parse_pvals(c.pvals);
  if (!(c.t_total > 0.0)) throw UsageError("--t-total must be > 0");
  const Problem problem = load_solved(c, c.index);
  const ScalingReport rep = scaling_study(problem, pvals, AnnealSchedule::linear(c.t_total));
  write_text_file(c.out, scaling_csv(rep));
  write_text_file(sidecar(c.out, ".report.json"), envelope(c, scaling_summary(rep)).dump(2) + "\n");
  log << "slopes: qaoa1 " << rep.slope_qaoa1 << ", qaoa2 " << rep.slope_qaoa2 << ", msqw " << rep.slope_msqw << '\n';
}

void cmd_profile(const RunConfig& c, std::ostream& log) {
  HeuristicScheduleParams hp;
  hp.gamma0 = c.gamma0;
  hp.delta_gamma = c.dgamma;
  hp.p = c.stages;
  hp.decay = parse_decay(c.decay);
  const auto rows = emit_schedule_profile(hp);
  const ProfileShape shape = analyze_profile(rows);
  const HeuristicSchedule sched = build_heuristic_schedule(hp, std::vector<double>(static_cast<std::size_t>(hp.p), 1.0));
  Json result;
  result["alpha_strictly_decreasing"] = shape.alpha_strictly_decreasing;
  result["beta_strictly_increasing"] = shape.beta_strictly_increasing;
  result["crossings"] = shape.crossings;
  result["clamped"] = sched.gammas.clamped;
  result["msqw_schedule"] = Json::parse(schedule_to_json(schedule_file_for(hp, sched, Protocol::msqw)));
  result["qaoa_schedule"] = Json::parse(schedule_to_json(schedule_file_for(hp, sched, Protocol::qaoa)));
  write_text_file(c.out, profile_csv(rows));
  write_text_file(sidecar(c.out, ".summary.json"), envelope(c, result).dump(2) + "\n");
  log << "profile: " << rows.size() << " stages, " << shape.crossings << " crossing(s)\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  c.threads = default_thread_count();

  CLI::App app{"Multi-stage quantum walk vs QAOA benchmark on SK spin glasses", "msqw_bench"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", c.threads, "worker threads (default: MSQW_BENCH_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  };

  auto* gen = app.add_subcommand("gen", "generate SK instances as JSON Lines");
  gen->add_option("--n", c.n, "qubit count")->check(CLI::Range(2, kMaxStateQubits));
  gen->add_option("--count", c.count, "number of instances");
  gen->add_option("--seed", c.seed, "seed of the first instance; instance k uses seed + k");
  gen->add_option("--out", c.out, "output JSONL path")->required();

  auto* solve = app.add_subcommand("solve", "fill in exact ground states");
  solve->add_option("--in", c.in, "instance JSONL")->required();
  solve->add_option("--out", c.out, "output JSONL (default: rewrite --in)");
  add_threads(solve);

  auto* scan = app.add_subcommand("scan", "landscape scan for one instance");
  scan->add_option("--in", c.in, "solved instance JSONL")->required();
  scan->add_option("--index", c.index, "instance line (0-based)");
  scan->add_option("--out", c.out, "grid CSV path")->required();
  scan->add_option("--protocol", c.protocol, "msqw or qaoa");
  scan->add_option("--stages", c.stages, "stage count p");
  scan->add_option("--grid-points", c.grid_points, "points per axis");
  scan->add_option("--gamma-max", c.gamma_max, "upper hopping rate");
  scan->add_option("--t-max", c.t_max, "upper walk time (p = 1)");
  scan->add_option("--alpha-max", c.alpha_max, "upper driver angle (p = 1)");
  scan->add_option("--beta-max", c.beta_max, "upper problem angle (p = 1)");
  scan->add_option("--decay", c.decay, "geometric or linear (p >= 3)");
  scan->add_option("--dgamma", c.dgamma, "upper decay parameter (p >= 3)");
  scan->add_option("--tmin", c.tmin, "runtime window start");
  scan->add_option("--tmax", c.tmax, "runtime window end");
  scan->add_option("--samples", c.samples, "runtime samples per grid point");
  scan->add_option("--seed", c.seed, "runtime sampling seed");
  add_threads(scan);

  auto* compare = app.add_subcommand("compare", "single-stage QW vs QAOA over many instances");
  compare->add_option("--in", c.in, "solved instance JSONL")->required();
  compare->add_option("--out", c.out, "dominance CSV path")->required();
  compare->add_option("--grid-points", c.grid_points, "points per axis");
  compare->add_option("--gamma-max", c.gamma_max, "upper hopping rate");
  compare->add_option("--t-max", c.t_max, "upper walk time");
  compare->add_option("--alpha-max", c.alpha_max, "upper driver angle");
  compare->add_option("--beta-max", c.beta_max, "upper problem angle");
  add_threads(compare);

  auto* scaling = app.add_subcommand("scaling", "annealing approximation error vs stage count");
  scaling->add_option("--in", c.in, "solved instance JSONL (n <= 8)")->required();
  scaling->add_option("--index", c.index, "instance line (0-based)");
  scaling->add_option("--out", c.out, "scaling CSV path")->required();
  scaling->add_option("--pvals", c.pvals, "comma-separated stage counts");
  scaling->add_option("--t-total", c.t_total, "total anneal time of the linear schedule");

  auto* profile = app.add_subcommand("profile", "normalized alpha/t, beta/t schedule profile");
  profile->add_option("--stages", c.stages, "stage count p");
  profile->add_option("--gamma0", c.gamma0, "initial hopping rate");
  profile->add_option("--dgamma", c.dgamma, "decay parameter");
  profile->add_option("--decay", c.decay, "geometric or linear");
  profile->add_option("--out", c.out, "profile CSV path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*gen) {
      c.command = "gen";
      cmd_gen(c, out);
    } else if (*solve) {
      c.command = "solve";
      cmd_solve(c, out);
    } else if (*scan) {
      c.command = "scan";
      cmd_scan(c, out);
    } else if (*compare) {
      c.command = "compare";
      cmd_compare(c, out);
    } else if (*scaling) {
      c.command = "scaling";
      cmd_scaling(c, out);
    } else if (*profile) {
      c.command = "profile";
      cmd_profile(c, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace msqw::cli
