#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "thermoelast/solver.hpp"

namespace thermoelast {

/// Closed-form solution pair used for convergence studies:
///   u*(t,x)     = sin(pi xh) cos t,          xh = (x-a)/(b-a)
///   theta*(t,x) = 2 + e^{-t} cos(pi xh)
/// with the source terms that make (u*, theta*) solve the forced system.
struct ManufacturedSolution {
  double a{}, b{}, mu{};

  double xh(double x) const { return (x - a) / (b - a); }
  double kap() const { return M_PI / (b - a); }

  double u(double t, double x) const { return std::sin(M_PI * xh(x)) * std::cos(t); }
  double v(double t, double x) const { return -std::sin(M_PI * xh(x)) * std::sin(t); }
  double theta(double t, double x) const {
    return 2.0 + std::exp(-t) * std::cos(M_PI * xh(x));
  }

  double fu(double t, double x) const {
    const double k = kap();
    return (k * k - 1.0) * std::sin(M_PI * xh(x)) * std::cos(t) +
           mu * k * std::exp(-t) * std::sin(M_PI * xh(x));
  }
  double ftheta(double t, double x) const {
    const double k = kap();
    return std::exp(-t) * (k * k - 1.0) * std::cos(M_PI * xh(x)) +
           mu * theta(t, x) * k * std::cos(M_PI * xh(x)) * std::sin(t);
  }

  Forcing forcing() const {
    ManufacturedSolution self = *this;
    return {[self](double t, double x) { return self.fu(t, x); },
            [self](double t, double x) { return self.ftheta(t, x); }};
  }

  InitialData initial(const Grid& g) const {
    InitialData d;
    d.u0.resize(g.n);
    d.v0.resize(g.n);
    d.theta0.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      d.u0[i] = u(0.0, g.nodes[i]);
      d.v0[i] = v(0.0, g.nodes[i]);
      d.theta0[i] = theta(0.0, g.nodes[i]);
    }
    d.u0.front() = 0.0;
    d.u0.back() = 0.0;
    return validate_initial(std::move(d));
  }
};

struct MmsLevel {
  int n{};
  double dt{};
  double err_u{}, err_theta{};  // L2 errors at t = T
};

struct ConvergenceTable {
  std::vector<MmsLevel> levels;
  std::vector<double> order_u, order_theta;  // log2 ratios between levels
};

/// Runs the manufactured problem on grids n, 2n-1, 4n-3, ... (dx halves each
/// level, dt follows the scheme's stable step) and reports observed orders.
inline ConvergenceTable manufactured_convergence(const RunSpec& base, int levels) {
  if (levels < 3) throw ContractError("manufactured_convergence: needs >= 3 levels");
  ManufacturedSolution ms{base.a, base.b, base.mu};
  const Forcing forcing = ms.forcing();
  ConvergenceTable table;
  int n = base.n;
  for (int lvl = 0; lvl < levels; ++lvl) {
    RunSpec spec = base;
    spec.n = n;
    spec.dt.reset();
    spec.n_modes.reset();
    const Grid g = make_grid(spec.a, spec.b, spec.n);
    const InitialData init = ms.initial(g);
    spec.sample_every = 1 << 20;  // only endpoints matter here
    const Trajectory traj = run(spec, &forcing, &init);
    if (traj.status != RunStatus::Completed)
      throw ContractError("manufactured_convergence: run did not complete");
    const State& fin = traj.samples.back().state;
    std::vector<double> eu(g.n), eth(g.n);
    for (int i = 0; i < g.n; ++i) {
      eu[i] = fin.u[i] - ms.u(fin.t, g.nodes[i]);
      eth[i] = fin.theta[i] - ms.theta(fin.t, g.nodes[i]);
    }
    table.levels.push_back({spec.n, traj.dt_effective, l2_norm(eu, g), l2_norm(eth, g)});
    n = 2 * n - 1;
  }
  for (std::size_t i = 0; i + 1 < table.levels.size(); ++i) {
    table.order_u.push_back(
        std::log2(table.levels[i].err_u / table.levels[i + 1].err_u));
    table.order_theta.push_back(
        std::log2(table.levels[i].err_theta / table.levels[i + 1].err_theta));
  }
  return table;
}

inline double least_squares_slope(std::span<const double> t, std::span<const double> y) {
  const std::size_t m = t.size();
  if (m < 2 || y.size() != m) throw ContractError("least_squares_slope: bad input");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double denom = m * stt - st * st;
  if (denom == 0.0) throw ContractError("least_squares_slope: degenerate abscissae");
  return (m * sty - st * sy) / denom;
}

struct BoundFit {
  double c1{}, c2{};
  double max_relative_excess{};  // max_i L_i / (c1 e^{c2 t_i}) - 1, <= 0 by construction
  bool degenerate = false;       // L is numerically zero along the run
};

/// Fits the envelope L(t) <= c1 e^{c2 t} over a completed trajectory: c2 from
/// a least-squares line through log L, c1 inflated until every sample is
/// covered.
inline BoundFit exp_bound_fit(const Trajectory& traj) {
  if (traj.status != RunStatus::Completed)
    throw ContractError("exp_bound_fit: trajectory did not complete");
  if (traj.samples.size() < 2) throw ContractError("exp_bound_fit: needs >= 2 samples");
  double lmax = 0.0;
  for (const auto& s : traj.samples) lmax = std::max(lmax, s.row.lyapunov_l);
  if (lmax <= 1e-13) return {0.0, 0.0, 0.0, true};
  std::vector<double> t, logl;
  for (const auto& s : traj.samples) {
    if (s.row.lyapunov_l > 0.0) {
      t.push_back(s.row.t);
      logl.push_back(std::log(s.row.lyapunov_l));
    }
  }
  if (t.size() < 2) throw ContractError("exp_bound_fit: too few positive samples");
  BoundFit fit;
  fit.c2 = least_squares_slope(t, logl);
  double mean_t = 0.0, mean_l = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mean_t += t[i];
    mean_l += logl[i];
  }
  mean_t /= static_cast<double>(t.size());
  mean_l /= static_cast<double>(t.size());
  fit.c1 = std::exp(mean_l - fit.c2 * mean_t);
  double worst = 0.0;
  for (const auto& s : traj.samples)
    worst = std::max(worst, s.row.lyapunov_l * std::exp(-fit.c2 * s.row.t));
  fit.c1 = std::max(fit.c1, worst);
  double excess = -std::numeric_limits<double>::infinity();
  for (const auto& s : traj.samples)
    excess = std::max(excess,
                      s.row.lyapunov_l / (fit.c1 * std::exp(fit.c2 * s.row.t)) - 1.0);
  fit.max_relative_excess = excess;
  return fit;
}

struct UniquenessReport {
  double delta{};
  std::vector<double> t;
  std::vector<double> n_values;  // N(t) = ||dv||^2 + ||du_x||^2 + ||dtheta||^2
  double n0{}, n_max{};
  double growth_rate{};  // least-squares slope of log N
};

/// Continuous-dependence experiment: the run is repeated with theta0 perturbed
/// by delta cos(pi xh) and the squared distance N(t) between the two
/// trajectories is recorded. N scales as delta^2 in the stable regime.
inline UniquenessReport uniqueness_experiment(const RunSpec& spec, double delta) {
  if (delta < 0.0) throw ContractError("uniqueness_experiment: delta must be >= 0");
  const Grid g = make_grid(spec.a, spec.b, spec.n);
  InitialData base = preset(spec.preset_name, g, spec.preset_params, spec.table_path);
  InitialData pert = base;
  const double kap = M_PI / (g.b - g.a);
  for (int i = 0; i < g.n; ++i)
    pert.theta0[i] += delta * std::cos(kap * (g.nodes[i] - g.a));
  pert = validate_initial(std::move(pert));

  RunSpec rs = spec;
  rs.n_modes.reset();
  const Trajectory ta = run(rs, nullptr, &base);
  const Trajectory tb = run(rs, nullptr, &pert);
  if (ta.status != RunStatus::Completed || tb.status != RunStatus::Completed)
    throw ContractError("uniqueness_experiment: a run did not complete");
  if (ta.samples.size() != tb.samples.size())
    throw ContractError("uniqueness_experiment: sample schedules differ");

  UniquenessReport rep;
  rep.delta = delta;
  std::vector<double> dv(g.n), dux(g.n), dth(g.n);
  for (std::size_t k = 0; k < ta.samples.size(); ++k) {
    const State& sa = ta.samples[k].state;
    const State& sb = tb.samples[k].state;
    std::vector<double> du(g.n);
    for (int i = 0; i < g.n; ++i) {
      du[i] = sa.u[i] - sb.u[i];
      dv[i] = sa.v[i] - sb.v[i];
      dth[i] = sa.theta[i] - sb.theta[i];
    }
    dux = derivative(du, g, 1, BoundaryKind::DirichletZero);
    const double nk = inner(dv, dv, g) + inner(dux, dux, g) + inner(dth, dth, g);
    rep.t.push_back(sa.t);
    rep.n_values.push_back(nk);
  }
  rep.n0 = rep.n_values.front();
  rep.n_max = *std::max_element(rep.n_values.begin(), rep.n_values.end());
  std::vector<double> ts, logn;
  for (std::size_t k = 0; k < rep.n_values.size(); ++k) {
    if (rep.n_values[k] > 0.0) {
      ts.push_back(rep.t[k]);
      logn.push_back(std::log(rep.n_values[k]));
    }
  }
  rep.growth_rate = ts.size() >= 2 ? least_squares_slope(ts, logn) : 0.0;
  return rep;
}

struct SweepEntry {
  int n_modes{};
  double sup_diff_u{}, sup_diff_theta{};  // vs the full-grid reference run
  double max_u_h2{}, max_v_h1{}, max_theta_h1{};
  double theta_t_l2l2{};  // discrete L2-in-time of the sampled theta increments
};

struct SweepReport {
  std::vector<SweepEntry> entries;
};

namespace detail {

inline double h1_norm(std::span<const double> f, const Grid& g, BoundaryKind bc) {
  const auto fx = derivative(f, g, 1, bc);
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f[i] * f[i];
  double s = integrate(sq, g);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = fx[i] * fx[i];
  s += integrate(sq, g);
  return std::sqrt(s);
}

inline double h2_norm_dirichlet(std::span<const double> f, const Grid& g) {
  const auto fxx = derivative(f, g, 2, BoundaryKind::DirichletZero);
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = fxx[i] * fxx[i];
  const double h1 = h1_norm(f, g, BoundaryKind::DirichletZero);
  return std::sqrt(h1 * h1 + integrate(sq, g));
}

}  // namespace detail

/// Runs the spec once on the full grid and once per requested mode count, and
/// reports the sup-norm distance of each truncated run from the reference
/// together with the norm bounds that stay uniform in the mode count.
inline SweepReport galerkin_sweep(const RunSpec& spec, const std::vector<int>& modes) {
  RunSpec ref_spec = spec;
  ref_spec.n_modes.reset();
  const Trajectory ref = run(ref_spec);
  if (ref.status != RunStatus::Completed)
    throw ContractError("galerkin_sweep: reference run did not complete");
  const Grid g = make_grid(spec.a, spec.b, spec.n);

  SweepReport rep;
  for (int m : modes) {
    RunSpec ms = spec;
    ms.n_modes = m;
    const Trajectory tm = run(ms);
    if (tm.status != RunStatus::Completed)
      throw ContractError("galerkin_sweep: truncated run did not complete");
    if (tm.samples.size() != ref.samples.size())
      throw ContractError("galerkin_sweep: sample schedules differ");
    SweepEntry e;
    e.n_modes = m;
    for (std::size_t k = 0; k < tm.samples.size(); ++k) {
      const State& sm = tm.samples[k].state;
      const State& sr = ref.samples[k].state;
      for (int i = 0; i < g.n; ++i) {
        e.sup_diff_u = std::max(e.sup_diff_u, std::abs(sm.u[i] - sr.u[i]));
        e.sup_diff_theta = std::max(e.sup_diff_theta, std::abs(sm.theta[i] - sr.theta[i]));
      }
      e.max_u_h2 = std::max(e.max_u_h2, detail::h2_norm_dirichlet(sm.u, g));
      e.max_v_h1 = std::max(e.max_v_h1, detail::h1_norm(sm.v, g, BoundaryKind::DirichletZero));
      e.max_theta_h1 =
          std::max(e.max_theta_h1, detail::h1_norm(sm.theta, g, BoundaryKind::NeumannZero));
      if (k > 0) {
        const double dts = tm.samples[k].state.t - tm.samples[k - 1].state.t;
        std::vector<double> dth(g.n);
        for (int i = 0; i < g.n; ++i)
          dth[i] = (sm.theta[i] - tm.samples[k - 1].state.theta[i]) / dts;
        std::vector<double> sq(g.n);
        for (int i = 0; i < g.n; ++i) sq[i] = dth[i] * dth[i];
        e.theta_t_l2l2 += dts * integrate(sq, g);
      }
    }
    e.theta_t_l2l2 = std::sqrt(e.theta_t_l2l2);
    rep.entries.push_back(e);
  }
  return rep;
}

struct CfhsSweepReport {
  int count{};
  int violations{};
  double max_ratio{};  // largest lhs/rhs seen, bound is 13/8
  std::uint64_t seed{};
};

namespace detail {

// Deterministic uniform double in [0,1) from raw engine output. The standard
// distributions are implementation-defined, which would break byte-for-byte
// reproducibility across library versions.
inline double u01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Property sweep for the 13/8 inequality over random positive cosine fields
/// psi = c0 + sum a_k cos(k pi xh), c0 = 1 + sum |a_k|, K in 1..6.
inline CfhsSweepReport cfhs_property_sweep(int count, std::uint64_t seed, const Grid& g) {
  if (count < 1) throw ContractError("cfhs_property_sweep: count must be >= 1");
  std::mt19937_64 eng(seed);
  CfhsSweepReport rep;
  rep.count = count;
  rep.seed = seed;
  const double kap = M_PI / (g.b - g.a);
  std::vector<double> psi(g.n);
  for (int trial = 0; trial < count; ++trial) {
    const int kk = 1 + static_cast<int>(eng() % 6);
    std::vector<double> a(kk);
    double c0 = 1.0;
    for (int k = 0; k < kk; ++k) {
      a[k] = 2.0 * detail::u01(eng) - 1.0;
      c0 += std::abs(a[k]);
    }
    for (int i = 0; i < g.n; ++i) {
      double s = c0;
      for (int k = 0; k < kk; ++k)
        s += a[k] * std::cos((k + 1) * kap * (g.nodes[i] - g.a));
      psi[i] = s;
    }
    const CfhsReport r = cfhs_check(psi, g);
    if (r.violated) ++rep.violations;
    if (std::isfinite(r.ratio)) rep.max_ratio = std::max(rep.max_ratio, r.ratio);
  }
  return rep;
}

}  // namespace thermoelast
