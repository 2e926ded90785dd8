#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "thermoelast/grid.hpp"
#include "thermoelast/operators.hpp"

using namespace thermoelast;

TEST_CASE("make_grid basic layout") {
  const Grid g = make_grid(0.0, 1.0, 5);
  CHECK(g.n == 5);
  CHECK(g.dx == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.nodes.front() == 0.0);
  CHECK(g.nodes[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.nodes.back() == 1.0);
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 2), ConfigError);
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 11), ConfigError);
  CHECK_THROWS_AS(make_grid(2.0, 1.0, 11), ConfigError);
}

TEST_CASE("trapezoid weights sum to the interval length exactly") {
  const Grid g = make_grid(-1.0, 1.0, 101);
  double s = 0.0;
  for (double w : g.weights) s += w;
  CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
  std::vector<double> ones(g.n, 1.0);
  CHECK(integrate(ones, g) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("integrate sin(pi x) approaches 2/pi at second order") {
  double prev_err = 0.0;
  for (int n : {51, 101, 201}) {
    const Grid g = make_grid(0.0, 1.0, n);
    std::vector<double> f(g.n);
    for (int i = 0; i < g.n; ++i) f[i] = std::sin(M_PI * g.nodes[i]);
    const double err = std::abs(integrate(f, g) - 2.0 / M_PI);
    if (prev_err > 0.0) CHECK(err < 0.3 * prev_err);  // ~4x per halving
    prev_err = err;
  }
  CHECK(prev_err < 1e-4);
}

TEST_CASE("derivative reproduces sin(pi x) derivatives") {
  const Grid g = make_grid(0.0, 1.0, 101);
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = std::sin(M_PI * g.nodes[i]);
  const auto d1 = derivative(f, g, 1, BoundaryKind::DirichletZero);
  const auto d2 = derivative(f, g, 2, BoundaryKind::DirichletZero);
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i < g.n; ++i) {
    e1 = std::max(e1, std::abs(d1[i] - M_PI * std::cos(M_PI * g.nodes[i])));
    e2 = std::max(e2, std::abs(d2[i] + M_PI * M_PI * std::sin(M_PI * g.nodes[i])));
  }
  CHECK(e1 < 1e-2);
  CHECK(e2 < 1e-2);
}

TEST_CASE("derivative error quarters when dx halves") {
  const auto max_err = [](int n) {
    const Grid g = make_grid(0.0, 1.0, n);
    std::vector<double> f(g.n);
    for (int i = 0; i < g.n; ++i) f[i] = std::sin(M_PI * g.nodes[i]);
    const auto d2 = derivative(f, g, 2, BoundaryKind::DirichletZero);
    double e = 0.0;
    for (int i = 0; i < g.n; ++i)
      e = std::max(e, std::abs(d2[i] + M_PI * M_PI * std::sin(M_PI * g.nodes[i])));
    return e;
  };
  const double r = max_err(101) / max_err(201);
  CHECK(r > 3.5);
  CHECK(r < 4.5);
}

TEST_CASE("Neumann first derivative endpoints are exactly zero") {
  const Grid g = make_grid(0.0, 1.0, 33);
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = 2.0 + std::cos(3.0 * M_PI * g.nodes[i]);
  const auto d1 = derivative(f, g, 1, BoundaryKind::NeumannZero);
  CHECK(d1.front() == 0.0);
  CHECK(d1.back() == 0.0);
}

TEST_CASE("Dirichlet second derivative endpoints are exactly zero") {
  const Grid g = make_grid(0.0, 1.0, 33);
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = std::sin(M_PI * g.nodes[i]);
  f.front() = 0.0;
  f.back() = 0.0;
  const auto d2 = derivative(f, g, 2, BoundaryKind::DirichletZero);
  CHECK(d2.front() == 0.0);
  CHECK(d2.back() == 0.0);
}

TEST_CASE("Neumann second derivative annihilates constants exactly") {
  const Grid g = make_grid(0.0, 2.0, 17);
  std::vector<double> f(g.n, 3.25);
  for (double v : derivative(f, g, 2, BoundaryKind::NeumannZero)) CHECK(v == 0.0);
}

TEST_CASE("weighted column sums of the Neumann Laplacian vanish") {
  // w^T D2 = 0 makes the heat step conserve the trapezoid integral of theta.
  const Grid g = make_grid(0.0, 1.0, 21);
  std::mt19937_64 eng(7);
  std::vector<double> f(g.n);
  for (auto& v : f) v = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  const auto d2 = derivative(f, g, 2, BoundaryKind::NeumannZero);
  CHECK(std::abs(integrate(d2, g)) < 1e-13);
}

TEST_CASE("first_derivative_adjoint satisfies the pairing identity exactly") {
  // <theta, adj(v)>_W = -<v, D1 theta>_W for arbitrary fields.
  const Grid g = make_grid(-0.5, 1.5, 37);
  std::mt19937_64 eng(11);
  std::vector<double> theta(g.n), v(g.n);
  for (int i = 0; i < g.n; ++i) {
    theta[i] = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    v[i] = static_cast<double>(eng() >> 11) * 0x1.0p-53 - 0.5;
  }
  const auto adj = first_derivative_adjoint(v, g);
  const auto d1 = derivative(theta, g, 1, BoundaryKind::NeumannZero);
  const double lhs = inner(theta, adj, g);
  const double rhs = -inner(v, d1, g);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("first_derivative_adjoint is consistent with d/dx in the interior") {
  const Grid g = make_grid(0.0, 1.0, 401);
  std::vector<double> v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = std::sin(M_PI * g.nodes[i]);
  const auto adj = first_derivative_adjoint(v, g);
  double e = 0.0;
  for (int i = 4; i + 4 < g.n; ++i)
    e = std::max(e, std::abs(adj[i] - M_PI * std::cos(M_PI * g.nodes[i])));
  CHECK(e < 1e-4);
}

TEST_CASE("operator contract violations throw") {
  const Grid g = make_grid(0.0, 1.0, 11);
  std::vector<double> bad(g.n + 1, 0.0);
  CHECK_THROWS_AS(derivative(bad, g, 1, BoundaryKind::NeumannZero), ContractError);
  std::vector<double> f(g.n, 0.0);
  CHECK_THROWS_AS(derivative(f, g, 3, BoundaryKind::NeumannZero), ContractError);
  CHECK_THROWS_AS(first_derivative_adjoint(bad, g), ContractError);
}
