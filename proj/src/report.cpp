#include "msqw/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace msqw {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::string grid_csv(const GridScanResult& r) {
  std::ostringstream out;
  out << "axis1,axis2,energy,success_prob\n";
  for (std::size_t i = 0; i < r.axis1.values.size(); ++i) {
    for (std::size_t j = 0; j < r.axis2.values.size(); ++j) {
      const std::size_t k = r.index(i, j);
      out << format_double(r.axis1.values[i]) << ',' << format_double(r.axis2.values[j]) << ','
          << format_double(r.energy[k]) << ',' << format_double(r.success_prob[k]) << '\n';
    }
  }
  return out.str();
}

nlohmann::ordered_json grid_summary(const GridScanResult& r) {
  const std::size_t emin = r.argmin_energy();
  const std::size_t pmax = r.argmax_prob();
  const std::size_t cols = r.axis2.values.size();
  nlohmann::ordered_json j;
  j["instance_id"] = r.instance_id;
  j["protocol"] = to_string(r.protocol);
  j["stages"] = r.stages;
  if (!r.decay.empty()) j["decay"] = r.decay;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["axis1"] = {{"name", r.axis1.name}, {"points", r.axis1.values.size()}};
  j["axis2"] = {{"name", r.axis2.name}, {"points", r.axis2.values.size()}};
  j["min_energy"] = {{"value", r.energy[emin]},
                     {"se", r.energy_se[emin]},
                     {r.axis1.name, r.axis1.values[emin / cols]},
                     {r.axis2.name, r.axis2.values[emin % cols]}};
  j["max_success_prob"] = {{"value", r.success_prob[pmax]},
                           {"se", r.prob_se[pmax]},
                           {r.axis1.name, r.axis1.values[pmax / cols]},
                           {r.axis2.name, r.axis2.values[pmax % cols]}};
  return j;
}

std::string dominance_csv(const DominanceReport& r) {
  std::ostringstream out;
  out << "instance_id,qw_best_energy,qaoa_best_energy,qw_best_prob,qaoa_best_prob\n";
  for (const auto& row : r.rows) {
    out << row.instance_id << ',' << format_double(row.qw_best_energy) << ',' << format_double(row.qaoa_best_energy)
        << ',' << format_double(row.qw_best_prob) << ',' << format_double(row.qaoa_best_prob) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json dominance_summary(const DominanceReport& r) {
  nlohmann::ordered_json j;
  j["instances"] = r.rows.size();
  j["qw_energy_wins"] = r.qw_energy_wins;
  j["qw_prob_wins"] = r.qw_prob_wins;
  j["qw_both_wins"] = r.qw_both_wins;
  return j;
}

std::string scaling_csv(const ScalingReport& r) {
  auto cell = [](const std::vector<double>& v, std::size_t k) { return k < v.size() ? format_double(v[k]) : ""; };
  std::ostringstream out;
  out << "p,err_qaoa1,err_qaoa2,err_msqw\n";
  for (std::size_t k = 0; k < r.p_values.size(); ++k) {
    out << r.p_values[k] << ',' << cell(r.err_qaoa1, k) << ',' << cell(r.err_qaoa2, k) << ',' << cell(r.err_msqw, k)
        << '\n';
  }
  return out.str();
}

nlohmann::ordered_json scaling_summary(const ScalingReport& r) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); };
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["instance_id"] = r.instance_id;
  j["instance_seed"] = r.seed;
  j["schedule"] = {{"name", r.schedule_name}, {"t_total", r.t_total}};
  j["p_values"] = r.p_values;
  j["slopes"] = {{"qaoa1", num(r.slope_qaoa1)}, {"qaoa2", num(r.slope_qaoa2)}, {"msqw", num(r.slope_msqw)}};
  j["h_max"] = r.h_max;
  j["hdot_max"] = r.hdot_max;
  j["commutator_norm"] = r.commutator_norm;
  j["reference"] = {{"steps", r.reference_steps}, {"last_change", r.reference_change}};
  return j;
}

std::string profile_csv(const std::vector<ProfileRow>& rows) {
  std::ostringstream out;
  out << "stage,gamma,alpha_over_t,beta_over_t\n";
  for (const auto& r : rows) {
    out << r.stage << ',' << format_double(r.gamma) << ',' << format_double(r.alpha_over_t) << ','
        << format_double(r.beta_over_t) << '\n';
  }
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace msqw
