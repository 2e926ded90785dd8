#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "thermoelast/diagnostics.hpp"

using namespace thermoelast;

namespace {

// Independent quadrature oracle (composite Simpson, analytic integrand).
double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  const double h = (b - a) / (2 * m);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

State nodal_state(const Grid& g, const std::function<double(double)>& u,
                  const std::function<double(double)>& v,
                  const std::function<double(double)>& theta) {
  State s;
  s.u.resize(g.n);
  s.v.resize(g.n);
  s.theta.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    s.u[i] = u(g.nodes[i]);
    s.v[i] = v(g.nodes[i]);
    s.theta[i] = theta(g.nodes[i]);
  }
  s.u.front() = 0.0;
  s.u.back() = 0.0;
  return s;
}

const auto zero = [](double) { return 0.0; };

}  // namespace

TEST_CASE("energy of simple states") {
  const Grid g = make_grid(0.0, 1.0, 201);
  const State rest = nodal_state(g, zero, zero, [](double) { return 2.0; });
  const auto er = energy(rest, g);
  CHECK(er.kinetic == 0.0);
  CHECK(er.elastic == 0.0);
  CHECK(er.thermal == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(er.total == doctest::Approx(2.0).epsilon(1e-14));

  const State kin =
      nodal_state(g, zero, [](double x) { return std::sin(M_PI * x); },
                  [](double) { return 1.0; });
  CHECK(energy(kin, g).kinetic == doctest::Approx(0.25).epsilon(1e-4));

  const State ela =
      nodal_state(g, [](double x) { return std::sin(M_PI * x); }, zero,
                  [](double) { return 1.0; });
  CHECK(energy(ela, g).elastic == doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-4));
}

TEST_CASE("fisher information against analytic values") {
  const Grid g = make_grid(0.0, 1.0, 2001);
  const State flat = nodal_state(g, zero, zero, [](double) { return 3.0; });
  CHECK(fisher(flat, g) == 0.0);

  // theta = (1+x)^2 has theta_x^2/theta = 4 pointwise.
  const State quad =
      nodal_state(g, zero, zero, [](double x) { return (1.0 + x) * (1.0 + x); });
  CHECK(fisher(quad, g) == doctest::Approx(4.0).epsilon(5e-3));

  const State expo = nodal_state(g, zero, zero, [](double x) { return std::exp(x); });
  CHECK(fisher(expo, g) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(5e-3));
}

TEST_CASE("dissipation against a quadrature oracle") {
  const Grid g = make_grid(0.0, 1.0, 2001);
  const State flat = nodal_state(g, zero, zero, [](double) { return 0.7; });
  CHECK(dissipation(flat, g) == 0.0);

  // log theta = 3x^2 - 2x^3 has zero slope at both endpoints (Neumann
  // compatible) and (log theta)_xx = 6 - 12x.
  const auto th = [](double x) { return std::exp(x * x * (3.0 - 2.0 * x)); };
  const State s = nodal_state(g, zero, zero, th);
  const double oracle = simpson(
      [&](double x) {
        const double lxx = 6.0 - 12.0 * x;
        return th(x) * lxx * lxx;
      },
      0.0, 1.0, 2000);
  CHECK(dissipation(s, g) == doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("fisher and dissipation scale linearly in theta") {
  const Grid g = make_grid(0.0, 1.0, 301);
  const auto th = [](double x) { return 2.0 + 0.5 * std::cos(M_PI * x); };
  State s = nodal_state(g, zero, zero, th);
  const double f1 = fisher(s, g), d1 = dissipation(s, g);
  for (auto& v : s.theta) v *= 7.5;
  CHECK(fisher(s, g) == doctest::Approx(7.5 * f1).epsilon(1e-12));
  CHECK(dissipation(s, g) == doctest::Approx(7.5 * d1).epsilon(1e-12));
}

TEST_CASE("lyapunov and coupling") {
  const Grid g = make_grid(0.0, 1.0, 2001);
  const State rest = nodal_state(g, zero, zero, [](double) { return 1.0; });
  CHECK(lyapunov(rest, g) == 0.0);
  CHECK(coupling(rest, g, 1.0) == 0.0);

  const auto sine = [](double x) { return std::sin(M_PI * x); };
  const State s = nodal_state(g, sine, sine, [](double x) { return std::exp(x); });
  const double expected =
      0.5 * ((std::exp(1.0) - 1.0) + M_PI * M_PI / 2.0 + std::pow(M_PI, 4) / 2.0);
  CHECK(lyapunov(s, g) == doctest::Approx(expected).epsilon(1e-3));

  // G vanishes identically when v = 0, for any theta and mu.
  const State still = nodal_state(g, sine, zero, [](double x) { return std::exp(x); });
  CHECK(coupling(still, g, 3.0) == 0.0);
  // G is linear in mu.
  CHECK(coupling(s, g, -2.0) == doctest::Approx(-2.0 * coupling(s, g, 1.0)).epsilon(1e-12));
}

TEST_CASE("floor tripping") {
  const Grid g = make_grid(0.0, 1.0, 11);
  State s = nodal_state(g, zero, zero, [](double) { return 1.0; });
  s.theta[5] = 1e-13;
  CHECK_THROWS_AS(fisher(s, g), FloorTripped);
  CHECK_THROWS_AS(dissipation(s, g), FloorTripped);
  CHECK_THROWS_AS(log_theta_norms(s, g), FloorTripped);
}

TEST_CASE("log theta norms") {
  const Grid g = make_grid(0.0, 1.0, 2001);
  const State flat = nodal_state(g, zero, zero, [](double) { return 2.0; });
  const auto nf = log_theta_norms(flat, g);
  CHECK(nf.linf == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(nf.h1 == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const State expo = nodal_state(g, zero, zero, [](double x) { return std::exp(x); });
  const auto ne = log_theta_norms(expo, g);
  CHECK(ne.linf == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ne.h1 == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-2));
  CHECK(ne.positivity_floor == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("positivity certificate lower-bounds min theta") {
  const Grid g = make_grid(0.0, 1.0, 301);
  const auto th = [](double x) { return 2.0 + 0.5 * std::cos(M_PI * x); };
  const State s = nodal_state(g, zero, zero, th);
  const auto n = log_theta_norms(s, g);
  double mn = s.theta[0];
  for (double v : s.theta) mn = std::min(mn, v);
  CHECK(mn >= n.positivity_floor * (1.0 - 1e-14));
}

TEST_CASE("cfhs check on reference fields") {
  const Grid g = make_grid(0.0, 1.0, 401);

  std::vector<double> flat(g.n, 2.0);
  const CfhsReport cr = cfhs_check(flat, g);
  CHECK(cr.lhs == 0.0);
  CHECK(cr.rhs == 0.0);
  CHECK(std::isnan(cr.ratio));
  CHECK_FALSE(cr.violated);

  // Small-amplitude expansion: ratio -> 1/4 as epsilon -> 0.
  std::vector<double> eps(g.n);
  for (int i = 0; i < g.n; ++i)
    eps[i] = 1.0 + 1e-3 * std::cos(2.0 * M_PI * g.nodes[i]);
  const CfhsReport ce = cfhs_check(eps, g);
  CHECK(ce.ratio == doctest::Approx(0.25).epsilon(0.01));
  CHECK_FALSE(ce.violated);

  std::vector<double> big(g.n);
  for (int i = 0; i < g.n; ++i)
    big[i] = 2.0 + std::cos(2.0 * M_PI * g.nodes[i]);
  const CfhsReport cb = cfhs_check(big, g);
  CHECK(cb.ratio <= 13.0 / 8.0);
  CHECK_FALSE(cb.violated);

  // Ratio invariance under psi -> lambda psi.
  std::vector<double> scaled = big;
  for (auto& v : scaled) v *= 11.0;
  CHECK(cfhs_check(scaled, g).ratio == doctest::Approx(cb.ratio).epsilon(1e-10));
}

TEST_CASE("cfhs preconditions") {
  const Grid g = make_grid(0.0, 1.0, 101);
  std::vector<double> neg(g.n, 1.0);
  neg[3] = -0.1;
  CHECK_THROWS_AS(cfhs_check(neg, g), ContractError);
  std::vector<double> sloped(g.n);
  for (int i = 0; i < g.n; ++i) sloped[i] = 1.0 + g.nodes[i];
  CHECK_THROWS_AS(cfhs_check(sloped, g), ContractError);
}

TEST_CASE("prop33 on reference fields") {
  const Grid g = make_grid(0.0, 1.0, 801);
  const State flat = nodal_state(g, zero, zero, [](double) { return 1.3; });
  const Prop33Report pf = prop33_check(flat, g);
  CHECK(pf.lhs == 0.0);
  CHECK(pf.rhs == 0.0);
  CHECK(pf.ok);

  const auto th = [](double x) { return 2.0 + std::cos(M_PI * x); };
  const State s = nodal_state(g, zero, zero, th);
  const Prop33Report ps = prop33_check(s, g);
  CHECK(ps.ok);
  // Both sides against Simpson oracles of the analytic integrands.
  const double f_oracle = simpson(
      [&](double x) {
        const double tx = -M_PI * std::sin(M_PI * x);
        return tx * tx / th(x);
      },
      0.0, 1.0, 2000);
  const double d_oracle = simpson(
      [&](double x) {
        const double t = th(x);
        const double tx = -M_PI * std::sin(M_PI * x);
        const double txx = -M_PI * M_PI * std::cos(M_PI * x);
        const double lxx = txx / t - (tx / t) * (tx / t);
        return t * lxx * lxx;
      },
      0.0, 1.0, 2000);
  CHECK(ps.lhs == doctest::Approx(f_oracle * f_oracle / 16.0).epsilon(1e-3));
  CHECK(ps.rhs == doctest::Approx(13.0 / 8.0 * 2.0 * d_oracle).epsilon(1e-3));
}

TEST_CASE("identity residual on synthetic series") {
  // L linear in t with D - G constant: centered and one-sided differences are
  // both exact, residual is identically zero.
  const std::vector<double> t{0.0, 0.1, 0.2, 0.3};
  const std::vector<double> l{1.0, 0.8, 0.6, 0.4};
  const std::vector<double> d{2.0, 2.0, 2.0, 2.0};
  const std::vector<double> gv{0.0, 0.0, 0.0, 0.0};
  const auto res = identity_residual_values(t, l, d, gv);
  for (double r : res) CHECK(std::abs(r) < 1e-12);

  const std::vector<double> t2{0.0, 0.1};
  CHECK_THROWS_AS(identity_residual_values(t2, t2, t2, t2), ContractError);
  const std::vector<double> tnu{0.0, 0.1, 0.25, 0.3};
  CHECK_THROWS_AS(identity_residual_values(tnu, l, d, gv), ContractError);
}
