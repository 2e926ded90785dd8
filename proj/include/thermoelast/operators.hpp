#pragma once

#include <span>
#include <vector>

#include "thermoelast/grid.hpp"

namespace thermoelast {

enum class BoundaryKind { DirichletZero, NeumannZero };

/// Second-order centered differences with ghost closure.
/// NeumannZero mirrors the field across the boundary (f[-1] = f[1]); the
/// endpoint first derivative is the boundary condition itself, exactly 0.
/// DirichletZero reflects oddly through the zero boundary value
/// (f[-1] = -f[1]), so the endpoint second derivative is 0 and the endpoint
/// first derivative is f[1]/dx.
inline std::vector<double> derivative(std::span<const double> field, const Grid& g,
                                      int order, BoundaryKind bc) {
  if (static_cast<int>(field.size()) != g.n)
    throw ContractError("derivative: field length != grid.n");
  if (order != 1 && order != 2) throw ContractError("derivative: order must be 1 or 2");
  const int n = g.n;
  const double dx = g.dx;
  std::vector<double> out(static_cast<std::size_t>(n));
  if (order == 1) {
    for (int i = 1; i + 1 < n; ++i)
      out[i] = (field[i + 1] - field[i - 1]) / (2.0 * dx);
    if (bc == BoundaryKind::NeumannZero) {
      out[0] = 0.0;
      out[n - 1] = 0.0;
    } else {
      out[0] = field[1] / dx;
      out[n - 1] = -field[n - 2] / dx;
    }
  } else {
    const double idx2 = 1.0 / (dx * dx);
    for (int i = 1; i + 1 < n; ++i)
      out[i] = (field[i + 1] - 2.0 * field[i] + field[i - 1]) * idx2;
    if (bc == BoundaryKind::NeumannZero) {
      out[0] = 2.0 * (field[1] - field[0]) * idx2;
      out[n - 1] = 2.0 * (field[n - 2] - field[n - 1]) * idx2;
    } else {
      out[0] = 0.0;
      out[n - 1] = 0.0;
    }
  }
  return out;
}

/// Adjoint of the Neumann first derivative in the trapezoid inner product,
/// with the sign of d/dx: adj = -W^{-1} D1^T W, W = diag(weights).
/// The pairing <theta, adj(v)>_W = -<v, derivative(theta,1,Neumann)>_W holds
/// exactly for all fields, which is what makes the coupled semi-discrete
/// system conserve the total energy identically. Consistency: second order in
/// the interior, first order at the four nodes nearest the boundary.
inline std::vector<double> first_derivative_adjoint(std::span<const double> v,
                                                    const Grid& g) {
  if (static_cast<int>(v.size()) != g.n)
    throw ContractError("first_derivative_adjoint: field length != grid.n");
  const int n = g.n;
  const double dx = g.dx;
  const auto& w = g.weights;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    if (i + 1 <= n - 2) s += w[i + 1] * v[i + 1];  // row i+1 of D1 is interior
    if (i - 1 >= 1) s -= w[i - 1] * v[i - 1];      // row i-1 of D1 is interior
    out[i] = s / (2.0 * dx * w[i]);
  }
  return out;
}

}  // namespace thermoelast
