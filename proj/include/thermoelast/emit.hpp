#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "thermoelast/config.hpp"
#include "thermoelast/harness.hpp"
#include "thermoelast/solver.hpp"

namespace thermoelast {

using Json = nlohmann::ordered_json;

/// 17 significant digits: lossless round trip for IEEE double.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes content to a temp file in the same directory, then renames it over
/// the target, so readers never observe a partial file.
inline void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + tmp);
    out << content;
    if (!out.flush()) throw ConfigError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("rename failed: " + tmp + " -> " + path);
}

inline constexpr const char* kCsvHeader =
    "t,E_kin,E_el,E_th,E_total,F,L,D,G,min_theta,max_theta,logtheta_Linf,"
    "logtheta_H1,residual";

inline std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& s : traj.samples) {
    const DiagnosticsRow& r = s.row;
    out << fmt17(r.t) << ',' << fmt17(r.e_kin) << ',' << fmt17(r.e_el) << ','
        << fmt17(r.e_th) << ',' << fmt17(r.e_total) << ',' << fmt17(r.fisher_info)
        << ',' << fmt17(r.lyapunov_l) << ',' << fmt17(r.dissipation_d) << ','
        << fmt17(r.coupling_g) << ',' << fmt17(r.min_theta) << ','
        << fmt17(r.max_theta) << ',' << fmt17(r.logtheta_linf) << ','
        << fmt17(r.logtheta_h1) << ',' << fmt17(r.residual) << "\n";
  }
  return out.str();
}

/// Echo of the resolved configuration in the same document format; parsing it
/// back reproduces an identical RunSpec (dt and n_modes already resolved).
inline std::string effective_config(const JobConfig& job) {
  const RunSpec& s = job.spec;
  std::ostringstream out;
  out << "[domain]\n"
      << "a = " << fmt17(s.a) << "\n"
      << "b = " << fmt17(s.b) << "\n"
      << "[grid]\n"
      << "n = " << s.n << "\n"
      << "[params]\n"
      << "mu = " << fmt17(s.mu) << "\n"
      << "[time]\n"
      << "T = " << fmt17(s.horizon) << "\n"
      << "dt = " << fmt17(s.dt.value()) << "\n"
      << "[scheme]\n"
      << "name = " << scheme_name(s.scheme) << "\n"
      << "[galerkin]\n"
      << "n_modes = " << (s.n_modes ? std::to_string(*s.n_modes) : std::string("grid"))
      << "\n"
      << "[init]\n"
      << "preset = " << s.preset_name << "\n";
  if (!s.table_path.empty()) out << "table = " << s.table_path << "\n";
  for (const auto& [key, value] : s.preset_params)
    out << key << " = " << fmt17(value) << "\n";
  out << "[output]\n"
      << "csv = " << job.csv_path << "\n"
      << "json = " << job.json_path << "\n"
      << "sample_every = " << s.sample_every << "\n"
      << "[guards]\n"
      << "theta_floor_guard = " << fmt17(s.theta_floor_guard) << "\n"
      << "[cfhs]\n"
      << "count = " << job.cfhs_count << "\n"
      << "seed = " << job.cfhs_seed << "\n"
      << "[mms]\n"
      << "levels = " << job.mms_levels << "\n"
      << "[uniq]\n"
      << "delta = " << fmt17(job.uniq_delta) << "\n"
      << "[sweep]\n"
      << "modes =";
  for (std::size_t i = 0; i < job.sweep_modes.size(); ++i)
    out << (i ? "," : " ") << job.sweep_modes[i];
  out << "\n";
  return out.str();
}

namespace detail {

// Doubles go through fmt17 as strings where bit-stability of the output file
// matters more than JSON numeric typing.
inline Json num(double v) { return Json(fmt17(v)); }

}  // namespace detail

inline Json trajectory_summary(const Trajectory& traj) {
  Json j;
  j["status"] = status_name(traj.status);
  j["scheme"] = scheme_name(traj.spec.scheme);
  j["dt_effective"] = detail::num(traj.dt_effective);
  j["n_samples"] = traj.samples.size();
  if (!traj.samples.empty()) {
    const auto& first = traj.samples.front().row;
    const auto& last = traj.samples.back().row;
    double min_theta = first.min_theta;
    bool floor_ok = true;
    for (const auto& s : traj.samples) {
      min_theta = std::min(min_theta, s.row.min_theta);
      // 1e-14 relative slack: exp(log(min)) can land one ulp above min.
      if (s.row.min_theta < std::exp(-s.row.logtheta_linf) * (1.0 - 1e-14))
        floor_ok = false;
    }
    j["t_final"] = detail::num(last.t);
    j["e_total_initial"] = detail::num(first.e_total);
    j["e_total_final"] = detail::num(last.e_total);
    j["e_total_rel_drift"] =
        detail::num(std::abs(last.e_total - first.e_total) / std::abs(first.e_total));
    j["min_theta_overall"] = detail::num(min_theta);
    j["positivity_floor_ok"] = floor_ok;
  }
  return j;
}

inline Json cfhs_summary(const CfhsSweepReport& rep) {
  Json j;
  j["count"] = rep.count;
  j["seed"] = rep.seed;
  j["violations"] = rep.violations;
  j["max_ratio"] = detail::num(rep.max_ratio);
  j["bound"] = detail::num(13.0 / 8.0);
  return j;
}

inline Json mms_summary(const ConvergenceTable& table) {
  Json j;
  Json levels = Json::array();
  for (const auto& lvl : table.levels) {
    Json e;
    e["n"] = lvl.n;
    e["dt"] = detail::num(lvl.dt);
    e["err_u"] = detail::num(lvl.err_u);
    e["err_theta"] = detail::num(lvl.err_theta);
    levels.push_back(e);
  }
  j["levels"] = levels;
  Json ou = Json::array(), ot = Json::array();
  for (double v : table.order_u) ou.push_back(detail::num(v));
  for (double v : table.order_theta) ot.push_back(detail::num(v));
  j["order_u"] = ou;
  j["order_theta"] = ot;
  return j;
}

inline Json uniqueness_summary(const UniquenessReport& rep) {
  Json j;
  j["delta"] = detail::num(rep.delta);
  j["n_initial"] = detail::num(rep.n0);
  j["n_max"] = detail::num(rep.n_max);
  j["growth_rate"] = detail::num(rep.growth_rate);
  j["n_samples"] = rep.n_values.size();
  return j;
}

inline Json sweep_summary(const SweepReport& rep) {
  Json j = Json::array();
  for (const auto& e : rep.entries) {
    Json entry;
    entry["n_modes"] = e.n_modes;
    entry["sup_diff_u"] = detail::num(e.sup_diff_u);
    entry["sup_diff_theta"] = detail::num(e.sup_diff_theta);
    entry["max_u_h2"] = detail::num(e.max_u_h2);
    entry["max_v_h1"] = detail::num(e.max_v_h1);
    entry["max_theta_h1"] = detail::num(e.max_theta_h1);
    entry["theta_t_l2l2"] = detail::num(e.theta_t_l2l2);
    j.push_back(entry);
  }
  return j;
}

inline Json bound_fit_summary(const BoundFit& fit) {
  Json j;
  j["C1"] = detail::num(fit.c1);
  j["C2"] = detail::num(fit.c2);
  j["max_relative_excess"] = detail::num(fit.max_relative_excess);
  j["degenerate"] = fit.degenerate;
  return j;
}

}  // namespace thermoelast
