#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "thermoelast/operators.hpp"
#include "thermoelast/state.hpp"

namespace thermoelast {

/// Division floor for theta in Fisher/log diagnostics. Below this, the state
/// has left the positive-temperature regime and the diagnostic refuses to
/// produce a number.
inline constexpr double kThetaFloor = 1e-12;

inline void require_theta_floor(std::span<const double> theta) {
  for (double th : theta)
    if (!(th > kThetaFloor)) throw FloorTripped("theta at or below 1e-12 floor");
}

struct EnergyBreakdown {
  double kinetic{}, elastic{}, thermal{}, total{};
};

/// E_kin = 1/2 int v^2, E_th = int theta by trapezoid. E_el = 1/2 int u_x^2 is
/// quadratured on cell edges with the piecewise-linear derivative; this is the
/// elastic energy the 3-point wave stencil balances exactly against E_kin.
inline EnergyBreakdown energy(const State& s, const Grid& g) {
  EnergyBreakdown e;
  e.kinetic = 0.5 * inner(s.v, s.v, g);
  double el = 0.0;
  for (int i = 0; i + 1 < g.n; ++i) {
    const double du = (s.u[i + 1] - s.u[i]) / g.dx;
    el += du * du;
  }
  e.elastic = 0.5 * g.dx * el;
  e.thermal = integrate(s.theta, g);
  e.total = e.kinetic + e.elastic + e.thermal;
  return e;
}

/// Fisher information F = int theta_x^2 / theta.
inline double fisher(const State& s, const Grid& g) {
  require_theta_floor(s.theta);
  const auto tx = derivative(s.theta, g, 1, BoundaryKind::NeumannZero);
  std::vector<double> integrand(s.theta.size());
  for (std::size_t i = 0; i < integrand.size(); ++i)
    integrand[i] = tx[i] * tx[i] / s.theta[i];
  return integrate(integrand, g);
}

/// Entropy dissipation D = int theta [(log theta)_xx]^2, with
/// (log theta)_xx = theta_xx/theta - (theta_x/theta)^2 evaluated algebraically.
inline double dissipation(const State& s, const Grid& g) {
  require_theta_floor(s.theta);
  const auto tx = derivative(s.theta, g, 1, BoundaryKind::NeumannZero);
  const auto txx = derivative(s.theta, g, 2, BoundaryKind::NeumannZero);
  std::vector<double> integrand(s.theta.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    const double r = tx[i] / s.theta[i];
    const double lxx = txx[i] / s.theta[i] - r * r;
    integrand[i] = s.theta[i] * lxx * lxx;
  }
  return integrate(integrand, g);
}

/// Lyapunov functional L = 1/2 (F + ||v_x||^2 + ||u_xx||^2).
inline double lyapunov(const State& s, const Grid& g) {
  const double f = fisher(s, g);
  const auto vx = derivative(s.v, g, 1, BoundaryKind::DirichletZero);
  const auto uxx = derivative(s.u, g, 2, BoundaryKind::DirichletZero);
  double nv = 0.0, nu = 0.0;
  std::vector<double> sq(s.v.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = vx[i] * vx[i];
  nv = integrate(sq, g);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = uxx[i] * uxx[i];
  nu = integrate(sq, g);
  return 0.5 * (f + nv + nu);
}

/// Coupling term G = (mu/2) int (theta_x^2/theta) v_x.
inline double coupling(const State& s, const Grid& g, double mu) {
  require_theta_floor(s.theta);
  const auto tx = derivative(s.theta, g, 1, BoundaryKind::NeumannZero);
  const auto vx = derivative(s.v, g, 1, BoundaryKind::DirichletZero);
  std::vector<double> integrand(s.theta.size());
  for (std::size_t i = 0; i < integrand.size(); ++i)
    integrand[i] = tx[i] * tx[i] / s.theta[i] * vx[i];
  return 0.5 * mu * integrate(integrand, g);
}

struct LogThetaNorms {
  double linf{};
  double h1{};
  double positivity_floor{};  // e^{-linf}, a certified lower bound for theta
};

inline LogThetaNorms log_theta_norms(const State& s, const Grid& g) {
  require_theta_floor(s.theta);
  const auto tx = derivative(s.theta, g, 1, BoundaryKind::NeumannZero);
  std::vector<double> lt(s.theta.size()), lx(s.theta.size());
  double linf = 0.0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    lt[i] = std::log(s.theta[i]);
    lx[i] = tx[i] / s.theta[i];
    linf = std::max(linf, std::abs(lt[i]));
  }
  std::vector<double> sq(lt.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = lt[i] * lt[i];
  const double n0 = integrate(sq, g);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = lx[i] * lx[i];
  const double n1 = integrate(sq, g);
  return {linf, std::sqrt(n0 + n1), std::exp(-linf)};
}

/// One sampled time's functional values, in CSV column order.
struct DiagnosticsRow {
  double t{};
  double e_kin{}, e_el{}, e_th{}, e_total{};
  double fisher_info{};
  double lyapunov_l{};
  double dissipation_d{};
  double coupling_g{};
  double min_theta{}, max_theta{};
  double logtheta_linf{}, logtheta_h1{};
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool residual_onesided = false;  // endpoint rows use one-sided differences
};

inline DiagnosticsRow make_row(const State& s, const Grid& g, double mu) {
  DiagnosticsRow r;
  r.t = s.t;
  const auto e = energy(s, g);
  r.e_kin = e.kinetic;
  r.e_el = e.elastic;
  r.e_th = e.thermal;
  r.e_total = e.total;
  r.fisher_info = fisher(s, g);
  r.lyapunov_l = lyapunov(s, g);
  r.dissipation_d = dissipation(s, g);
  r.coupling_g = coupling(s, g, mu);
  r.min_theta = *std::min_element(s.theta.begin(), s.theta.end());
  r.max_theta = *std::max_element(s.theta.begin(), s.theta.end());
  const auto ln = log_theta_norms(s, g);
  r.logtheta_linf = ln.linf;
  r.logtheta_h1 = ln.h1;
  return r;
}

/// Relative-absolute tolerance used for the inequality checks, so quadrature
/// noise cannot produce false alarms.
inline double inequality_tol(double rhs) { return 1e-8 * (1.0 + std::abs(rhs)); }

struct CfhsReport {
  double lhs{};    // int [(sqrt psi)_xx]^2
  double rhs{};    // int psi [(log psi)_xx]^2
  double ratio{};  // lhs/rhs, NaN when rhs == 0
  double bound = 13.0 / 8.0;
  bool violated = false;
};

/// Checks the 13/8 inequality between the curvature of sqrt(psi) and the
/// entropy-dissipation form, for positive psi with zero Neumann endpoints.
inline CfhsReport cfhs_check(std::span<const double> psi, const Grid& g) {
  if (static_cast<int>(psi.size()) != g.n)
    throw ContractError("cfhs_check: field length != grid.n");
  double mx = 0.0;
  for (double p : psi) {
    if (!(p > 0.0)) throw ContractError("cfhs_check: psi must be positive");
    mx = std::max(mx, std::abs(p));
  }
  // Neumann compatibility via the second-order one-sided derivative. For a
  // field even across the boundary this is O(dx^3); a genuinely sloped field
  // leaves an O(1) value that the O(dx) tolerance catches.
  const int n = g.n;
  const double slope_tol = 10.0 * g.dx * (1.0 + mx);
  const double d_lo = (-3.0 * psi[0] + 4.0 * psi[1] - psi[2]) / (2.0 * g.dx);
  const double d_hi = (3.0 * psi[n - 1] - 4.0 * psi[n - 2] + psi[n - 3]) / (2.0 * g.dx);
  if (std::abs(d_lo) > slope_tol || std::abs(d_hi) > slope_tol)
    throw ContractError("cfhs_check: psi does not satisfy zero Neumann endpoints");

  std::vector<double> root(psi.size());
  for (std::size_t i = 0; i < root.size(); ++i) root[i] = std::sqrt(psi[i]);
  const auto rxx = derivative(root, g, 2, BoundaryKind::NeumannZero);
  const auto px = derivative(psi, g, 1, BoundaryKind::NeumannZero);
  const auto pxx = derivative(psi, g, 2, BoundaryKind::NeumannZero);
  std::vector<double> li(psi.size()), ri(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    li[i] = rxx[i] * rxx[i];
    const double r = px[i] / psi[i];
    const double lxx = pxx[i] / psi[i] - r * r;
    ri[i] = psi[i] * lxx * lxx;
  }
  CfhsReport rep;
  rep.lhs = integrate(li, g);
  rep.rhs = integrate(ri, g);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs
                            : std::numeric_limits<double>::quiet_NaN();
  rep.violated = rep.lhs > rep.bound * rep.rhs + inequality_tol(rep.bound * rep.rhs);
  return rep;
}

struct Prop33Report {
  double lhs{};  // (F/4)^2 = (int (sqrt theta)_x^2)^2
  double rhs{};  // (13/8) * int theta * D
  bool ok = true;
};

/// Squared Fisher quarter against the dissipation, with the constant realized
/// as (13/8) * int theta via Cauchy-Schwarz plus the 13/8 inequality.
inline Prop33Report prop33_check(const State& s, const Grid& g) {
  Prop33Report rep;
  const double f = fisher(s, g);
  const double d = dissipation(s, g);
  const double eth = integrate(s.theta, g);
  rep.lhs = (f / 4.0) * (f / 4.0);
  rep.rhs = (13.0 / 8.0) * eth * d;
  rep.ok = rep.lhs <= rep.rhs + inequality_tol(rep.rhs);
  return rep;
}

/// Residual of the Lyapunov identity dL/dt = -D + G on uniformly spaced
/// samples: residual_i = (dL/dt)_i + D_i - G_i, centered in the interior and
/// one-sided (flagged) at the two endpoints.
inline std::vector<double> identity_residual_values(std::span<const double> t,
                                                    std::span<const double> l,
                                                    std::span<const double> d,
                                                    std::span<const double> gterm) {
  const std::size_t m = t.size();
  if (m < 3) throw ContractError("identity_residual: needs >= 3 samples");
  if (l.size() != m || d.size() != m || gterm.size() != m)
    throw ContractError("identity_residual: series length mismatch");
  const double dt0 = t[1] - t[0];
  for (std::size_t i = 1; i + 1 < m; ++i)
    if (std::abs((t[i + 1] - t[i]) - dt0) > 1e-9 * std::max(1.0, std::abs(dt0)))
      throw ContractError("identity_residual: non-uniform sample spacing");
  std::vector<double> res(m);
  res[0] = (l[1] - l[0]) / dt0 + d[0] - gterm[0];
  for (std::size_t i = 1; i + 1 < m; ++i)
    res[i] = (l[i + 1] - l[i - 1]) / (2.0 * dt0) + d[i] - gterm[i];
  res[m - 1] = (l[m - 1] - l[m - 2]) / dt0 + d[m - 1] - gterm[m - 1];
  return res;
}

}  // namespace thermoelast
