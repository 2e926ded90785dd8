#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "thermoelast/errors.hpp"

namespace thermoelast {

/// Uniform 1D mesh on [a,b] with composite-trapezoid quadrature weights.
struct Grid {
  double a{};
  double b{};
  int n{};
  double dx{};
  std::vector<double> nodes;
  std::vector<double> weights;  // dx except dx/2 at the endpoints
};

inline Grid make_grid(double a, double b, int n) {
  if (!(a < b)) throw ConfigError("make_grid: requires a < b");
  if (n < 3) throw ConfigError("make_grid: requires n >= 3");
  Grid g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.dx = (b - a) / (n - 1);
  g.nodes.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g.nodes[static_cast<std::size_t>(i)] = a + i * g.dx;
  g.nodes.front() = a;
  g.nodes.back() = b;
  g.weights.assign(static_cast<std::size_t>(n), g.dx);
  g.weights.front() = 0.5 * g.dx;
  g.weights.back() = 0.5 * g.dx;
  return g;
}

/// Composite trapezoid value of a nodal field.
/// Factored as dx * (f0/2 + f1 + ... + f_{n-1}/2) so constants integrate to
/// exactly (b-a) whenever dx*(n-1) rounds back to b-a.
inline double integrate(std::span<const double> field, const Grid& g) {
  if (static_cast<int>(field.size()) != g.n)
    throw ContractError("integrate: field length != grid.n");
  double s = 0.5 * (field.front() + field.back());
  for (int i = 1; i + 1 < g.n; ++i) s += field[static_cast<std::size_t>(i)];
  return g.dx * s;
}

/// Trapezoid inner product <f, g>.
inline double inner(std::span<const double> f, std::span<const double> h, const Grid& g) {
  if (f.size() != h.size() || static_cast<int>(f.size()) != g.n)
    throw ContractError("inner: field length != grid.n");
  double s = 0.5 * (f.front() * h.front() + f.back() * h.back());
  for (int i = 1; i + 1 < g.n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    s += f[u] * h[u];
  }
  return g.dx * s;
}

inline double l2_norm(std::span<const double> f, const Grid& g) {
  double s = 0.5 * (f.front() * f.front() + f.back() * f.back());
  for (int i = 1; i + 1 < g.n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    s += f[u] * f[u];
  }
  return std::sqrt(g.dx * s);
}

}  // namespace thermoelast
