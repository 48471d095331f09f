#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msqw/state.hpp"

namespace msqw {

struct Coupling {
  int a = 0;
  int b = 0;
  double j = 0.0;
};

/// Sherrington-Kirkpatrick instance. Energies are in units of the coupling
/// standard deviation.
struct SpinGlassInstance {
  int n = 0;
  std::vector<Coupling> couplings;  // a < b, each pair at most once
  std::vector<double> fields;       // length n
  std::string id;
  std::uint64_t seed = 0;

  /// Throws UsageError if any structural invariant is broken.
  void validate() const;
};

struct DiagonalEnergies {
  int n = 0;
  std::vector<double> energies;  // energies[z] = E_P(z)

  std::size_t dim() const { return energies.size(); }
  double max() const;
};

struct GroundStateRecord {
  std::string instance_id;
  Basis z_star = 0;  // lowest index among minimizers
  double e0 = 0.0;
  double e1 = 0.0;  // equals e0 when every state is degenerate
  int degeneracy = 0;
  std::vector<Basis> minimizers;
};

/// Couplings then fields, all i.i.d. N(0, 1), drawn from std::mt19937_64
/// seeded with `seed` through std::normal_distribution (libstdc++).
/// Couplings are drawn in row-major (a, b) order with a < b.
SpinGlassInstance generate_instance(int n, std::uint64_t seed);

std::string instance_id_for(int n, std::uint64_t seed);

/// E(z) = -sum_{a<b} J_ab s_a s_b - sum_b h_b s_b with s_b = +1 when bit b of z
/// is 0.
DiagonalEnergies build_diagonal(const SpinGlassInstance& inst);

/// Single-configuration energy, evaluated term by term.
double energy_of(const SpinGlassInstance& inst, Basis z);

/// H_d |psi> with H_d = -sum_j X_j. Not normalized.
StateVector apply_driver(const StateVector& state);

/// Exhaustive scan over all 2^n energies.
GroundStateRecord solve_ground_state(const DiagonalEnergies& diag, std::string instance_id = {});

// ---- instance files (JSON Lines) ----

struct InstanceRecord {
  SpinGlassInstance instance;
  std::optional<GroundStateRecord> ground;
};

std::string to_jsonl_line(const InstanceRecord& rec);
InstanceRecord parse_jsonl_line(std::string_view line);

std::vector<InstanceRecord> read_instances(const std::filesystem::path& path);
void write_instances(const std::filesystem::path& path, const std::vector<InstanceRecord>& recs);

}  // namespace msqw
