#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "msqw/experiment.hpp"

namespace msqw {

inline constexpr const char* kToolVersion = "msqw_bench 1.0.0";

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Header `axis1,axis2,energy,success_prob`, row-major over (axis1, axis2).
std::string grid_csv(const GridScanResult& r);
nlohmann::ordered_json grid_summary(const GridScanResult& r);

/// Header `instance_id,qw_best_energy,qaoa_best_energy,qw_best_prob,qaoa_best_prob`.
std::string dominance_csv(const DominanceReport& r);
nlohmann::ordered_json dominance_summary(const DominanceReport& r);

/// Header `p,err_qaoa1,err_qaoa2,err_msqw`; methods not run are left empty.
std::string scaling_csv(const ScalingReport& r);
nlohmann::ordered_json scaling_summary(const ScalingReport& r);

/// Header `stage,gamma,alpha_over_t,beta_over_t`.
std::string profile_csv(const std::vector<ProfileRow>& rows);

/// Writes `text` to `path`, throwing std::runtime_error naming the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace msqw
