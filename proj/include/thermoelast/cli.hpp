#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "thermoelast/emit.hpp"

namespace thermoelast {

/// Process exit codes for the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitGuardTripped = 2,
  kExitCheckFailed = 3,
};

namespace detail {

inline std::string join_out(const std::string& out_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(out_dir) / p).string();
}

inline void write_outputs(const JobConfig& job, const std::string& out_dir,
                          const Json& summary, const Trajectory* traj) {
  std::filesystem::create_directories(out_dir);
  if (traj) atomic_write(join_out(out_dir, job.csv_path), trajectory_csv(*traj));
  atomic_write(join_out(out_dir, job.json_path), summary.dump(2) + "\n");
  atomic_write(join_out(out_dir, "effective_config.ini"), effective_config(job));
}

inline int finish(RunStatus status, bool checks_ok) {
  if (status == RunStatus::PositivityGuardTripped) return kExitGuardTripped;
  if (status == RunStatus::Diverged || !checks_ok) return kExitCheckFailed;
  return kExitOk;
}

inline bool prop33_all_ok(const Trajectory& traj, const Grid& g) {
  for (const auto& s : traj.samples)
    if (!prop33_check(s.state, g).ok) return false;
  return true;
}

}  // namespace detail

/// Executes one subcommand against a parsed config and writes the result
/// files. Returns the process exit code.
inline int dispatch(const std::string& subcommand, const JobConfig& job_in,
                    const std::string& out_dir,
                    std::optional<std::uint64_t> seed = std::nullopt) {
  JobConfig job = job_in;
  if (seed) job.cfhs_seed = *seed;
  const Grid g = make_grid(job.spec.a, job.spec.b, job.spec.n);

  Json summary;
  summary["command"] = subcommand;

  if (subcommand == "run") {
    const Trajectory traj = run(job.spec);
    summary["trajectory"] = trajectory_summary(traj);
    const bool prop33_ok = detail::prop33_all_ok(traj, g);
    summary["checks"]["prop33_ok"] = prop33_ok;
    const bool floor_ok = summary["trajectory"].value("positivity_floor_ok", true);
    summary["checks"]["positivity_floor_ok"] = floor_ok;
    const bool ok = prop33_ok && floor_ok;
    summary["ok"] = ok && traj.status == RunStatus::Completed;
    detail::write_outputs(job, out_dir, summary, &traj);
    return detail::finish(traj.status, ok);
  }

  if (subcommand == "cfhs") {
    const CfhsSweepReport rep = cfhs_property_sweep(job.cfhs_count, job.cfhs_seed, g);
    summary["cfhs"] = cfhs_summary(rep);
    const bool ok = rep.violations == 0;
    summary["ok"] = ok;
    detail::write_outputs(job, out_dir, summary, nullptr);
    return ok ? kExitOk : kExitCheckFailed;
  }

  if (subcommand == "mms") {
    const ConvergenceTable table = manufactured_convergence(job.spec, job.mms_levels);
    summary["mms"] = mms_summary(table);
    bool ok = !table.order_u.empty();
    if (ok) {
      const double ou = table.order_u.back();
      const double ot = table.order_theta.back();
      ok = std::abs(ou - 2.0) <= 0.3 && std::abs(ot - 2.0) <= 0.3;
    }
    summary["ok"] = ok;
    detail::write_outputs(job, out_dir, summary, nullptr);
    return ok ? kExitOk : kExitCheckFailed;
  }

  if (subcommand == "uniq") {
    const UniquenessReport lo = uniqueness_experiment(job.spec, job.uniq_delta);
    const UniquenessReport hi = uniqueness_experiment(job.spec, 2.0 * job.uniq_delta);
    summary["uniq"]["delta"] = uniqueness_summary(lo);
    summary["uniq"]["double_delta"] = uniqueness_summary(hi);
    // N is quadratic in the perturbation size, so doubling delta must scale
    // N(t) by 4 at every sample in the stable regime.
    double worst = 0.0;
    for (std::size_t k = 0; k < lo.n_values.size(); ++k)
      if (lo.n_values[k] > 0.0)
        worst = std::max(worst, std::abs(hi.n_values[k] / lo.n_values[k] / 4.0 - 1.0));
    summary["uniq"]["max_ratio4_deviation"] = detail::num(worst);
    const bool ok = worst <= 0.1 && std::isfinite(lo.growth_rate);
    summary["ok"] = ok;
    detail::write_outputs(job, out_dir, summary, nullptr);
    return ok ? kExitOk : kExitCheckFailed;
  }

  if (subcommand == "sweep-galerkin") {
    const SweepReport rep = galerkin_sweep(job.spec, job.sweep_modes);
    summary["sweep"] = sweep_summary(rep);
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < rep.entries.size(); ++i)
      if (rep.entries[i + 1].sup_diff_u >= rep.entries[i].sup_diff_u) monotone = false;
    bool uniform = true;
    // Uniform-boundedness check: norm quantities vary by <= 10% over the
    // well-resolved mode counts.
    const auto spread_ok = [&](auto field) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (const auto& e : rep.entries) {
        if (e.n_modes < 8) continue;
        lo = std::min(lo, field(e));
        hi = std::max(hi, field(e));
      }
      return !(hi > 0.0) || (hi - lo) <= 0.1 * hi;
    };
    uniform = spread_ok([](const SweepEntry& e) { return e.max_u_h2; }) &&
              spread_ok([](const SweepEntry& e) { return e.max_v_h1; }) &&
              spread_ok([](const SweepEntry& e) { return e.max_theta_h1; }) &&
              spread_ok([](const SweepEntry& e) { return e.theta_t_l2l2; });
    summary["checks"]["monotone_sup_diff"] = monotone;
    summary["checks"]["uniform_norms"] = uniform;
    const bool ok = monotone && uniform;
    summary["ok"] = ok;
    detail::write_outputs(job, out_dir, summary, nullptr);
    return ok ? kExitOk : kExitCheckFailed;
  }

  if (subcommand == "fit-bound") {
    const Trajectory traj = run(job.spec);
    summary["trajectory"] = trajectory_summary(traj);
    if (traj.status != RunStatus::Completed) {
      summary["ok"] = false;
      detail::write_outputs(job, out_dir, summary, &traj);
      return detail::finish(traj.status, true);
    }
    const BoundFit fit = exp_bound_fit(traj);
    summary["fit"] = bound_fit_summary(fit);
    const bool ok = fit.degenerate ||
                    (std::isfinite(fit.c1) && std::isfinite(fit.c2) &&
                     fit.max_relative_excess <= 1e-12);
    summary["ok"] = ok;
    detail::write_outputs(job, out_dir, summary, &traj);
    return ok ? kExitOk : kExitCheckFailed;
  }

  std::cerr << "unknown subcommand: " << subcommand << "\n";
  return kExitConfigError;
}

inline int dispatch_file(const std::string& subcommand, const std::string& config_path,
                         const std::string& out_dir,
                         std::optional<std::uint64_t> seed = std::nullopt) {
  try {
    const JobConfig job = parse_config(config_path);
    return dispatch(subcommand, job, out_dir, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ContractError& e) {
    std::cerr << "internal contract violation: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace thermoelast
