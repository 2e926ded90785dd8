#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "thermoelast/basis.hpp"
#include "thermoelast/grid.hpp"

namespace thermoelast {

/// Solution snapshot: displacement u, velocity v = u_t, temperature theta.
/// u, v vanish at both endpoints; theta > 0 nodally.
struct State {
  double t{};
  std::vector<double> u, v, theta;
};

struct InitialData {
  std::vector<double> u0, v0, theta0;
  double theta_floor{};  // positive lower bound of theta0
};

/// Half-Galerkin state: u, v as sine coefficients, theta kept nodal.
struct GalerkinState {
  double t{};
  std::vector<double> uc, vc;
  std::vector<double> theta;
};

inline constexpr double kDirichletEndpointTol = 1e-12;

inline InitialData validate_initial(InitialData data) {
  const std::size_t n = data.theta0.size();
  if (data.u0.size() != n || data.v0.size() != n)
    throw ContractError("validate_initial: field lengths differ");
  if (n < 3) throw ContractError("validate_initial: fields too short");
  for (const auto* f : {&data.u0, &data.v0}) {
    if (std::abs(f->front()) > kDirichletEndpointTol ||
        std::abs(f->back()) > kDirichletEndpointTol)
      throw BoundaryViolation("validate_initial: u0/v0 must vanish at the endpoints");
  }
  const double mn = *std::min_element(data.theta0.begin(), data.theta0.end());
  if (!(mn > 0.0))
    throw NonPositiveTemperature("validate_initial: min(theta0) must be positive, got " +
                                 std::to_string(mn));
  if (data.theta_floor <= 0.0 || data.theta_floor > mn) data.theta_floor = mn;
  return data;
}

/// Reads a custom-table file: one line "x u0 v0 theta0" per node, nodes in
/// increasing order matching the run grid exactly (no interpolation).
inline InitialData load_table(const std::string& path, const Grid& g) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_table: cannot open " + path);
  InitialData d;
  d.u0.reserve(g.n);
  d.v0.reserve(g.n);
  d.theta0.reserve(g.n);
  std::string line;
  int i = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    double x, u, v, th;
    if (!(ls >> x)) continue;  // blank line
    if (!(ls >> u >> v >> th))
      throw ConfigError("load_table: " + path + ":" + std::to_string(lineno) +
                        ": expected 'x u0 v0 theta0'");
    if (i >= g.n)
      throw ConfigError("load_table: " + path + ": more rows than grid nodes");
    const double scale = std::max(1.0, std::max(std::abs(g.a), std::abs(g.b)));
    if (std::abs(x - g.nodes[i]) > 1e-9 * scale)
      throw ConfigError("load_table: " + path + ":" + std::to_string(lineno) +
                        ": x does not match grid node " + std::to_string(i));
    d.u0.push_back(u);
    d.v0.push_back(v);
    d.theta0.push_back(th);
    ++i;
  }
  if (i != g.n)
    throw ConfigError("load_table: " + path + ": fewer rows than grid nodes");
  return validate_initial(std::move(d));
}

/// Initial-data presets:
///   rest:         u0 = v0 = 0, theta0 = const            (params: theta0)
///   sine-mode:    u0 = A sin(k pi (x-a)/(b-a)), v0 = 0   (params: k, A, theta0)
///   bump:         u0 = v0 = 0, theta0 = c + A cos(pi (x-a)/(b-a))  (params: c, A)
///   custom-table: nodal values from file                 (table_path)
inline InitialData preset(const std::string& name, const Grid& g,
                          const std::map<std::string, double>& params,
                          const std::string& table_path = {}) {
  auto get = [&](const std::string& key, double fallback,
                 bool required = false) -> double {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (required) throw ConfigError("preset '" + name + "': missing parameter '" + key + "'");
    return fallback;
  };
  const std::size_t n = static_cast<std::size_t>(g.n);
  InitialData d;
  d.u0.assign(n, 0.0);
  d.v0.assign(n, 0.0);
  if (name == "rest") {
    d.theta0.assign(n, get("theta0", 1.0));
  } else if (name == "sine-mode") {
    const double A = get("A", 0.1);
    const int k = static_cast<int>(get("k", 1.0));
    if (k < 1) throw ConfigError("preset sine-mode: requires k >= 1");
    const double kap = k * M_PI / (g.b - g.a);
    for (std::size_t i = 0; i < n; ++i) d.u0[i] = A * std::sin(kap * (g.nodes[i] - g.a));
    d.u0.front() = 0.0;
    d.u0.back() = 0.0;
    d.theta0.assign(n, get("theta0", 1.0));
  } else if (name == "bump") {
    const double c = get("c", 2.0);
    const double A = get("A", 0.5);
    d.theta0.resize(n);
    const double kap = M_PI / (g.b - g.a);
    for (std::size_t i = 0; i < n; ++i)
      d.theta0[i] = c + A * std::cos(kap * (g.nodes[i] - g.a));
  } else if (name == "custom-table") {
    if (table_path.empty()) throw ConfigError("preset custom-table: no table path given");
    return load_table(table_path, g);
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  const double floor = get("theta_floor", 0.0);
  if (floor > 0.0) d.theta_floor = floor;
  return validate_initial(std::move(d));
}

/// Projects the displacement data onto the sine space; the temperature is kept
/// nodal (half-Galerkin: only the momentum equation is projected).
inline GalerkinState project_initial(const InitialData& data, const SineBasis& basis,
                                     const Grid& g) {
  GalerkinState s;
  s.t = 0.0;
  s.uc = project_sine(data.u0, basis, g);
  s.vc = project_sine(data.v0, basis, g);
  s.theta = data.theta0;
  return s;
}

inline State reconstruct_state(const GalerkinState& gs, const SineBasis& basis,
                               const Grid& g) {
  State s;
  s.t = gs.t;
  s.u = reconstruct(gs.uc, basis, g);
  s.v = reconstruct(gs.vc, basis, g);
  s.theta = gs.theta;
  return s;
}

}  // namespace thermoelast
