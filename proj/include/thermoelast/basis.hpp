#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "thermoelast/grid.hpp"

namespace thermoelast {

/// Sine modes phi_k(x) = sin(k pi (x-a)/(b-a)), k = 1..n_modes, sampled on the
/// grid. On a uniform grid with endpoint nodes the discrete trapezoid Gram
/// matrix of these modes is exactly diagonal (DST orthogonality), with
/// <phi_k, phi_k> = (b-a)/2, and each mode is an exact eigenvector of the
/// 3-point Dirichlet Laplacian with eigenvalue lambda_k below.
struct SineBasis {
  int n_modes{};
  std::vector<std::vector<double>> phi;   // phi[k][i], endpoints exactly 0
  std::vector<std::vector<double>> dphi;  // analytic phi_k' on the nodes
  std::vector<double> gram;               // diagonal trapezoid Gram entries
  std::vector<double> omega2;             // continuum eigenvalues (k pi/(b-a))^2
  std::vector<double> lambda;             // discrete Laplacian eigenvalues
};

inline SineBasis make_sine_basis(const Grid& g, int n_modes) {
  if (n_modes < 1) throw ConfigError("make_sine_basis: requires n_modes >= 1");
  if (n_modes > g.n - 2)
    throw ConfigError("make_sine_basis: n_modes must be <= n - 2 for distinct modes");
  const double len = g.b - g.a;
  SineBasis basis;
  basis.n_modes = n_modes;
  basis.phi.resize(n_modes);
  basis.dphi.resize(n_modes);
  basis.gram.resize(n_modes);
  basis.omega2.resize(n_modes);
  basis.lambda.resize(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const double kap = (k + 1) * M_PI / len;
    auto& p = basis.phi[k];
    auto& dp = basis.dphi[k];
    p.resize(g.n);
    dp.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      const double xi = g.nodes[i] - g.a;
      p[i] = std::sin(kap * xi);
      dp[i] = kap * std::cos(kap * xi);
    }
    p.front() = 0.0;
    p.back() = 0.0;
    basis.gram[k] = inner(p, p, g);
    basis.omega2[k] = kap * kap;
    const double s = std::sin(0.5 * kap * g.dx);
    basis.lambda[k] = 4.0 * s * s / (g.dx * g.dx);
  }
  return basis;
}

/// Discrete L2 projection coefficients c_k = <field, phi_k> / <phi_k, phi_k>.
/// For sine modes these coincide with the H1_0-orthogonal projection.
inline std::vector<double> project_sine(std::span<const double> field,
                                        const SineBasis& basis, const Grid& g) {
  if (static_cast<int>(field.size()) != g.n)
    throw ContractError("project_sine: field length != grid.n");
  double scale = 0.0;
  for (double v : field) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale);
  if (std::abs(field.front()) > tol || std::abs(field.back()) > tol)
    throw ContractError("project_sine: field endpoints are not (Dirichlet) zero");
  std::vector<double> c(basis.n_modes);
  for (int k = 0; k < basis.n_modes; ++k)
    c[k] = inner(field, basis.phi[k], g) / basis.gram[k];
  return c;
}

inline std::vector<double> reconstruct(std::span<const double> coeffs,
                                       const SineBasis& basis, const Grid& g) {
  if (static_cast<int>(coeffs.size()) != basis.n_modes)
    throw ContractError("reconstruct: coefficient count != n_modes");
  std::vector<double> out(static_cast<std::size_t>(g.n), 0.0);
  for (int k = 0; k < basis.n_modes; ++k) {
    const auto& p = basis.phi[k];
    for (int i = 1; i + 1 < g.n; ++i) out[i] += coeffs[k] * p[i];
  }
  return out;
}

}  // namespace thermoelast
