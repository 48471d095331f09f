#include "msqw/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <utility>

#include "json.hpp"
#include "msqw/errors.hpp"

namespace msqw {

namespace {

// Energies closer than this (relative) to e0 count as degenerate minimizers.
constexpr double kDegeneracyTol = 1e-12;

inline double spin(Basis z, int b) { return ((z >> b) & 1U) ? -1.0 : 1.0; }

}  // namespace

void SpinGlassInstance::validate() const {
  if (n < 1 || n > kMaxStateQubits) throw ConfigError("instance " + id + ": bad qubit count");
  if (static_cast<int>(fields.size()) != n) throw UsageError("instance " + id + ": fields length != n");
  std::set<std::pair<int, int>> seen;
  for (const auto& c : couplings) {
    if (!(0 <= c.a && c.a < c.b && c.b < n)) throw UsageError("instance " + id + ": coupling index out of order");
    if (!seen.emplace(c.a, c.b).second) throw UsageError("instance " + id + ": duplicate coupling");
    if (!std::isfinite(c.j)) throw UsageError("instance " + id + ": non-finite coupling");
  }
  for (double h : fields) {
    if (!std::isfinite(h)) throw UsageError("instance " + id + ": non-finite field");
  }
}

double DiagonalEnergies::max() const { return *std::max_element(energies.begin(), energies.end()); }

std::string instance_id_for(int n, std::uint64_t seed) {
  return "sk-n" + std::to_string(n) + "-s" + std::to_string(seed);
}

SpinGlassInstance generate_instance(int n, std::uint64_t seed) {
  if (n < 2) throw ConfigError("generate_instance: need n >= 2");
  dimension_for(n);
  SpinGlassInstance inst;
  inst.n = n;
  inst.seed = seed;
  inst.id = instance_id_for(n, seed);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  inst.couplings.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) inst.couplings.push_back({a, b, normal(rng)});
  }
  inst.fields.resize(static_cast<std::size_t>(n));
  for (auto& h : inst.fields) h = normal(rng);
  return inst;
}

double energy_of(const SpinGlassInstance& inst, Basis z) {
  double e = 0.0;
  for (const auto& c : inst.couplings) e -= c.j * spin(z, c.a) * spin(z, c.b);
  for (int b = 0; b < inst.n; ++b) e -= inst.fields[static_cast<std::size_t>(b)] * spin(z, b);
  return e;
}

DiagonalEnergies build_diagonal(const SpinGlassInstance& inst) {
  inst.validate();
  DiagonalEnergies d;
  d.n = inst.n;
  d.energies.resize(dimension_for(inst.n));
  for (std::size_t z = 0; z < d.energies.size(); ++z) d.energies[z] = energy_of(inst, static_cast<Basis>(z));
  return d;
}

StateVector apply_driver(const StateVector& state) {
  StateVector out(state.qubits());
  const std::size_t dim = state.dim();
  for (int j = 0; j < state.qubits(); ++j) {
    const std::size_t mask = std::size_t{1} << j;
    for (std::size_t z = 0; z < dim; ++z) out[z] -= state[z ^ mask];
  }
  return out;
}

GroundStateRecord solve_ground_state(const DiagonalEnergies& diag, std::string instance_id) {
  if (diag.energies.empty()) throw UsageError("solve_ground_state: empty energy table");
  GroundStateRecord g;
  g.instance_id = std::move(instance_id);
  const auto& e = diag.energies;
  g.e0 = *std::min_element(e.begin(), e.end());
  const double tol = kDegeneracyTol * std::max(1.0, std::abs(g.e0));
  double e1 = std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < e.size(); ++z) {
    if (e[z] - g.e0 <= tol) {
      g.minimizers.push_back(static_cast<Basis>(z));
    } else {
      e1 = std::min(e1, e[z]);
    }
  }
  g.z_star = g.minimizers.front();
  g.degeneracy = static_cast<int>(g.minimizers.size());
  g.e1 = std::isfinite(e1) ? e1 : g.e0;
  return g;
}

// ---- JSONL ----

std::string to_jsonl_line(const InstanceRecord& rec) {
  const auto& inst = rec.instance;
  nlohmann::ordered_json j;
  j["id"] = inst.id;
  j["n"] = inst.n;
  j["seed"] = inst.seed;
  auto cs = nlohmann::ordered_json::array();
  for (const auto& c : inst.couplings) cs.push_back({c.a, c.b, c.j});
  j["couplings"] = cs;
  j["fields"] = inst.fields;
  if (rec.ground) {
    j["e0"] = rec.ground->e0;
    j["z_star"] = rec.ground->z_star;
    j["degeneracy"] = rec.ground->degeneracy;
  } else {
    j["e0"] = nullptr;
    j["z_star"] = nullptr;
    j["degeneracy"] = nullptr;
  }
  return j.dump();
}

InstanceRecord parse_jsonl_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("instance line is not valid JSON: ") + e.what());
  }
  InstanceRecord rec;
  auto& inst = rec.instance;
  try {
    inst.id = j.at("id").get<std::string>();
    inst.n = j.at("n").get<int>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& c : j.at("couplings")) {
      inst.couplings.push_back({c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<double>()});
    }
    inst.fields = j.at("fields").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("instance line missing or malformed field: ") + e.what());
  }
  inst.validate();
  if (j.contains("e0") && !j["e0"].is_null()) {
    // The file keeps only e0, z_star and degeneracy; the rest is recomputed on demand.
    GroundStateRecord g = solve_ground_state(build_diagonal(inst), inst.id);
    const double stored = j["e0"].get<double>();
    if (std::abs(stored - g.e0) > 1e-9 * std::max(1.0, std::abs(g.e0))) {
      throw UsageError("instance " + inst.id + ": stored e0 disagrees with the couplings");
    }
    rec.ground = std::move(g);
  }
  return rec;
}

std::vector<InstanceRecord> read_instances(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  std::vector<InstanceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_jsonl_line(line));
    } catch (const std::exception& e) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_instances(const std::filesystem::path& path, const std::vector<InstanceRecord>& recs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  for (const auto& r : recs) out << to_jsonl_line(r) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace msqw
