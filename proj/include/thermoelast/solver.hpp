#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thermoelast/diagnostics.hpp"
#include "thermoelast/operators.hpp"
#include "thermoelast/state.hpp"

namespace thermoelast {

enum class Scheme { RK4, ImexCN };

inline const char* scheme_name(Scheme s) { return s == Scheme::RK4 ? "rk4" : "imex-cn"; }

/// Manufactured-solution style source terms for the two equations, as
/// functions of (t, x). Null pointer means the unforced system.
struct Forcing {
  std::function<double(double, double)> fu;      // added to dv/dt
  std::function<double(double, double)> ftheta;  // added to dtheta/dt
};

struct RunSpec {
  double a = 0.0, b = 1.0;
  int n = 101;
  double mu = 0.0;
  double horizon = 1.0;            // T
  std::optional<double> dt;        // nullopt = "auto" via stable_dt
  Scheme scheme = Scheme::ImexCN;
  std::optional<int> n_modes;      // nullopt = full grid (no Galerkin truncation)
  std::string preset_name = "rest";
  std::map<std::string, double> preset_params;
  std::string table_path;          // for preset "custom-table"
  int sample_every = 10;
  double theta_floor_guard = 0.0;

  void validate() const {
    if (!(horizon > 0.0)) throw ConfigError("RunSpec: requires T > 0");
    if (dt && !(*dt > 0.0)) throw ConfigError("RunSpec: requires dt > 0");
    if (sample_every < 1) throw ConfigError("RunSpec: requires sample_every >= 1");
    if (theta_floor_guard < 0.0) throw ConfigError("RunSpec: requires theta_floor_guard >= 0");
    if (n_modes && *n_modes > n / 2)
      throw ConfigError("RunSpec: requires n_modes <= n/2");
  }
};

enum class RunStatus { Completed, PositivityGuardTripped, Diverged };

inline const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::PositivityGuardTripped: return "PositivityGuardTripped";
    default: return "Diverged";
  }
}

struct Sample {
  State state;
  DiagnosticsRow row;
};

struct Trajectory {
  RunSpec spec;
  double dt_effective{};
  std::vector<Sample> samples;
  RunStatus status = RunStatus::Completed;
};

/// Largest stable step for the scheme, snapped down so that T/dt is an
/// integer (the final sample then lands exactly at T).
inline double stable_dt(const Grid& g, Scheme scheme, double horizon) {
  const double wave = 0.5 * g.dx;
  double base = scheme == Scheme::RK4 ? std::min(wave, 0.25 * g.dx * g.dx) : wave;
  const auto steps = static_cast<long long>(std::ceil(horizon / base - 1e-12));
  return horizon / static_cast<double>(std::max(1LL, steps));
}

struct StateDerivative {
  std::vector<double> du, dv, dtheta;
};

namespace detail {

inline void require_positive_theta(std::span<const double> theta) {
  for (double th : theta)
    if (!(th > 0.0)) throw PositivityGuard("non-positive temperature in rhs");
}

// Shared triple-of-vectors container so the RK4 kernel serves both the
// full-grid and the Galerkin representations.
struct Triple {
  std::vector<double> x, y, z;  // (u, v, theta) or (uc, vc, theta)
};

inline void axpy(Triple& out, const Triple& base, double h, const Triple& k) {
  const auto ax = [&](std::vector<double>& o, const std::vector<double>& b,
                      const std::vector<double>& d) {
    o.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) o[i] = b[i] + h * d[i];
  };
  ax(out.x, base.x, k.x);
  ax(out.y, base.y, k.y);
  ax(out.z, base.z, k.z);
}

template <class Rhs>
inline void rk4_advance(Triple& s, double t, double h, Rhs&& rhs) {
  Triple k1, k2, k3, k4, tmp;
  rhs(s, t, k1);
  axpy(tmp, s, 0.5 * h, k1);
  rhs(tmp, t + 0.5 * h, k2);
  axpy(tmp, s, 0.5 * h, k2);
  rhs(tmp, t + 0.5 * h, k3);
  axpy(tmp, s, h, k3);
  rhs(tmp, t + h, k4);
  const auto comb = [&](std::vector<double>& o, const std::vector<double>& a,
                        const std::vector<double>& b, const std::vector<double>& c,
                        const std::vector<double>& d) {
    for (std::size_t i = 0; i < o.size(); ++i)
      o[i] += h / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
  };
  comb(s.x, k1.x, k2.x, k3.x, k4.x);
  comb(s.y, k1.y, k2.y, k3.y, k4.y);
  comb(s.z, k1.z, k2.z, k3.z, k4.z);
}

// Full-grid semi-discretization. The heat coupling uses the trapezoid adjoint
// of the Neumann first derivative so that the discrete total energy
// E_kin + E_el + E_th is an exact invariant of this vector field.
inline void rhs_grid(const Triple& s, double t, double mu, const Grid& g,
                     const Forcing* forcing, bool with_diffusion, Triple& out) {
  require_positive_theta(s.z);
  const int n = g.n;
  out.x = s.y;  // du/dt = v
  const auto uxx = derivative(s.x, g, 2, BoundaryKind::DirichletZero);
  const auto tx = derivative(s.z, g, 1, BoundaryKind::NeumannZero);
  out.y.resize(n);
  for (int i = 0; i < n; ++i) out.y[i] = uxx[i] + mu * tx[i];
  const auto vxh = first_derivative_adjoint(s.y, g);
  out.z.resize(n);
  if (with_diffusion) {
    const auto txx = derivative(s.z, g, 2, BoundaryKind::NeumannZero);
    for (int i = 0; i < n; ++i) out.z[i] = txx[i] + mu * s.z[i] * vxh[i];
  } else {
    for (int i = 0; i < n; ++i) out.z[i] = mu * s.z[i] * vxh[i];
  }
  if (forcing) {
    for (int i = 0; i < n; ++i) {
      out.y[i] += forcing->fu(t, g.nodes[i]);
      out.z[i] += forcing->ftheta(t, g.nodes[i]);
    }
  }
  out.y.front() = 0.0;  // Dirichlet preservation
  out.y.back() = 0.0;
}

// Half-Galerkin semi-discretization: the momentum equation is the exact
// W-orthogonal projection of the full-grid operator onto the sine space
// (discrete Laplacian eigenvalues; coupling tested against phi_k), so the
// mode sweep converges to the full-grid run as n_modes grows.
inline void rhs_galerkin_t(const Triple& s, double t, double mu, const Grid& g,
                           const SineBasis& basis, const Forcing* forcing,
                           bool with_diffusion, Triple& out) {
  require_positive_theta(s.z);
  const int n = g.n;
  const int m = basis.n_modes;
  out.x = s.y;  // duc/dt = vc
  const auto tx = derivative(s.z, g, 1, BoundaryKind::NeumannZero);
  out.y.resize(m);
  for (int k = 0; k < m; ++k)
    out.y[k] = -basis.lambda[k] * s.x[k] + mu * inner(basis.phi[k], tx, g) / basis.gram[k];
  const auto v = reconstruct(s.y, basis, g);
  const auto vxh = first_derivative_adjoint(v, g);
  out.z.resize(n);
  if (with_diffusion) {
    const auto txx = derivative(s.z, g, 2, BoundaryKind::NeumannZero);
    for (int i = 0; i < n; ++i) out.z[i] = txx[i] + mu * s.z[i] * vxh[i];
  } else {
    for (int i = 0; i < n; ++i) out.z[i] = mu * s.z[i] * vxh[i];
  }
  if (forcing) {
    std::vector<double> fu(n);
    for (int i = 0; i < n; ++i) {
      fu[i] = forcing->fu(t, g.nodes[i]);
      out.z[i] += forcing->ftheta(t, g.nodes[i]);
    }
    for (int k = 0; k < m; ++k)
      out.y[k] += inner(fu, basis.phi[k], g) / basis.gram[k];
  }
}

// Crank-Nicolson step for theta diffusion with the mirror-ghost Neumann
// closure, in increment form: (I - dt/2 A) delta = dt A theta. The increment
// form keeps exact steady states (A theta = 0) bitwise fixed, and the scheme
// conserves the trapezoid integral of theta identically because the weighted
// column sums of A vanish.
inline void cn_diffuse(std::vector<double>& theta, double dt, const Grid& g) {
  const int n = g.n;
  const double c = dt / (2.0 * g.dx * g.dx);
  const auto atheta = derivative(theta, g, 2, BoundaryKind::NeumannZero);
  std::vector<double> lo(n, -c), di(n, 1.0 + 2.0 * c), up(n, -c), rhs(n), cp(n), dp(n);
  up[0] = -2.0 * c;
  lo[n - 1] = -2.0 * c;
  for (int i = 0; i < n; ++i) rhs[i] = dt * atheta[i];
  cp[0] = up[0] / di[0];
  dp[0] = rhs[0] / di[0];
  for (int i = 1; i < n; ++i) {
    const double m = di[i] - lo[i] * cp[i - 1];
    cp[i] = i < n - 1 ? up[i] / m : 0.0;
    dp[i] = (rhs[i] - lo[i] * dp[i - 1]) / m;
  }
  double delta = dp[n - 1];
  theta[n - 1] += delta;
  for (int i = n - 2; i >= 0; --i) {
    delta = dp[i] - cp[i] * delta;
    theta[i] += delta;
  }
}

}  // namespace detail

/// Semi-discrete right-hand side of the coupled system on the full grid.
inline StateDerivative rhs(const State& s, double mu, const Grid& g,
                           const Forcing* forcing = nullptr) {
  detail::Triple in{s.u, s.v, s.theta}, out;
  detail::rhs_grid(in, s.t, mu, g, forcing, /*with_diffusion=*/true, out);
  return {std::move(out.x), std::move(out.y), std::move(out.z)};
}

struct GalerkinDerivative {
  std::vector<double> duc, dvc, dtheta;
};

inline GalerkinDerivative rhs_galerkin(const GalerkinState& s, double mu, const Grid& g,
                                       const SineBasis& basis,
                                       const Forcing* forcing = nullptr) {
  detail::Triple in{s.uc, s.vc, s.theta}, out;
  detail::rhs_galerkin_t(in, s.t, mu, g, basis, forcing, /*with_diffusion=*/true, out);
  return {std::move(out.x), std::move(out.y), std::move(out.z)};
}

/// Advances one step. RK4 is the classical 4-stage method on the full coupled
/// system; IMEX-CN is a Strang arrangement: explicit half-step on the wave and
/// coupling terms, Crank-Nicolson solve for theta diffusion, explicit
/// half-step. Dirichlet endpoints of u and v are re-zeroed after each step.
inline State step(const State& s0, double dt, double mu, const Grid& g, Scheme scheme,
                  const Forcing* forcing = nullptr) {
  detail::Triple s{s0.u, s0.v, s0.theta};
  if (scheme == Scheme::RK4) {
    detail::rk4_advance(s, s0.t, dt, [&](const detail::Triple& in, double t,
                                         detail::Triple& out) {
      detail::rhs_grid(in, t, mu, g, forcing, true, out);
    });
  } else {
    const auto expl = [&](const detail::Triple& in, double t, detail::Triple& out) {
      detail::rhs_grid(in, t, mu, g, forcing, false, out);
    };
    detail::rk4_advance(s, s0.t, 0.5 * dt, expl);
    detail::cn_diffuse(s.z, dt, g);
    detail::rk4_advance(s, s0.t + 0.5 * dt, 0.5 * dt, expl);
  }
  s.x.front() = 0.0;
  s.x.back() = 0.0;
  s.y.front() = 0.0;
  s.y.back() = 0.0;
  State out;
  out.t = s0.t + dt;
  out.u = std::move(s.x);
  out.v = std::move(s.y);
  out.theta = std::move(s.z);
  return out;
}

inline GalerkinState step(const GalerkinState& s0, double dt, double mu, const Grid& g,
                          Scheme scheme, const SineBasis& basis,
                          const Forcing* forcing = nullptr) {
  detail::Triple s{s0.uc, s0.vc, s0.theta};
  if (scheme == Scheme::RK4) {
    detail::rk4_advance(s, s0.t, dt, [&](const detail::Triple& in, double t,
                                         detail::Triple& out) {
      detail::rhs_galerkin_t(in, t, mu, g, basis, forcing, true, out);
    });
  } else {
    const auto expl = [&](const detail::Triple& in, double t, detail::Triple& out) {
      detail::rhs_galerkin_t(in, t, mu, g, basis, forcing, false, out);
    };
    detail::rk4_advance(s, s0.t, 0.5 * dt, expl);
    detail::cn_diffuse(s.z, dt, g);
    detail::rk4_advance(s, s0.t + 0.5 * dt, 0.5 * dt, expl);
  }
  GalerkinState out;
  out.t = s0.t + dt;
  out.uc = std::move(s.x);
  out.vc = std::move(s.y);
  out.theta = std::move(s.z);
  return out;
}

namespace detail {

inline bool all_finite(const State& s) {
  for (const auto* f : {&s.u, &s.v, &s.theta})
    for (double v : *f)
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace detail

/// Runs the experiment described by the spec from t = 0 to t = T, recording a
/// sample (state + diagnostics row) every sample_every steps and at both ends.
/// Guard and divergence events set the status, keeping the partial trajectory;
/// run does not throw after the initial data has validated.
inline Trajectory run(const RunSpec& spec, const Forcing* forcing = nullptr,
                      const InitialData* initial_override = nullptr) {
  spec.validate();
  const Grid g = make_grid(spec.a, spec.b, spec.n);
  InitialData data = initial_override
                         ? validate_initial(*initial_override)
                         : preset(spec.preset_name, g, spec.preset_params, spec.table_path);

  double dt = spec.dt ? *spec.dt : stable_dt(g, spec.scheme, spec.horizon);
  {  // snap down so the final step lands exactly on T
    const auto steps = static_cast<long long>(std::ceil(spec.horizon / dt - 1e-12));
    dt = spec.horizon / static_cast<double>(std::max(1LL, steps));
  }
  const auto n_steps = static_cast<long long>(std::llround(spec.horizon / dt));

  Trajectory traj;
  traj.spec = spec;
  traj.dt_effective = dt;

  std::optional<SineBasis> basis;
  GalerkinState gs;
  State st;
  if (spec.n_modes) {
    basis.emplace(make_sine_basis(g, *spec.n_modes));
    gs = project_initial(data, *basis, g);
  } else {
    st = State{0.0, data.u0, data.v0, data.theta0};
  }

  const auto current_state = [&]() -> State {
    return spec.n_modes ? reconstruct_state(gs, *basis, g) : st;
  };

  const auto record = [&](const State& s) -> bool {
    if (!detail::all_finite(s)) {
      traj.status = RunStatus::Diverged;
      return false;
    }
    double mn = s.theta[0];
    for (double th : s.theta) mn = std::min(mn, th);
    if (mn <= spec.theta_floor_guard) {
      traj.status = RunStatus::PositivityGuardTripped;
      return false;
    }
    try {
      traj.samples.push_back({s, make_row(s, g, spec.mu)});
    } catch (const FloorTripped&) {
      traj.status = RunStatus::PositivityGuardTripped;
      return false;
    }
    return true;
  };

  if (record(current_state())) {
    for (long long k = 0; k < n_steps; ++k) {
      try {
        if (spec.n_modes)
          gs = step(gs, dt, spec.mu, g, spec.scheme, *basis, forcing);
        else
          st = step(st, dt, spec.mu, g, spec.scheme, forcing);
        // t from the step index, so accumulated addition cannot drift off T
        const double tk = static_cast<double>(k + 1) * dt;
        if (spec.n_modes)
          gs.t = tk;
        else
          st.t = tk;
      } catch (const PositivityGuard&) {
        traj.status = RunStatus::PositivityGuardTripped;
        break;
      }
      const bool sample_now = ((k + 1) % spec.sample_every == 0) || (k + 1 == n_steps);
      if (sample_now && !record(current_state())) break;
    }
  }

  // Fill Lyapunov-identity residuals when the sample schedule is uniform.
  if (traj.samples.size() >= 3) {
    std::vector<double> t, l, d, gv;
    for (const auto& s : traj.samples) {
      t.push_back(s.row.t);
      l.push_back(s.row.lyapunov_l);
      d.push_back(s.row.dissipation_d);
      gv.push_back(s.row.coupling_g);
    }
    try {
      const auto res = identity_residual_values(t, l, d, gv);
      for (std::size_t i = 0; i < res.size(); ++i) {
        traj.samples[i].row.residual = res[i];
        traj.samples[i].row.residual_onesided = (i == 0 || i + 1 == res.size());
      }
    } catch (const ContractError&) {
      // non-uniform schedule (T not a multiple of sample_every steps): leave NaN
    }
  }
  return traj;
}

/// Residuals of the Lemma-type identity along a recorded trajectory.
inline std::vector<double> identity_residual(const Trajectory& traj) {
  std::vector<double> t, l, d, gv;
  for (const auto& s : traj.samples) {
    t.push_back(s.row.t);
    l.push_back(s.row.lyapunov_l);
    d.push_back(s.row.dissipation_d);
    gv.push_back(s.row.coupling_g);
  }
  return identity_residual_values(t, l, d, gv);
}

}  // namespace thermoelast
