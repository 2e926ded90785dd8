#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "thermoelast/solver.hpp"

namespace thermoelast {

/// A run plus harness parameters, as resolved from one config document.
struct JobConfig {
  RunSpec spec;
  std::string csv_path = "trajectory.csv";
  std::string json_path = "summary.json";
  int cfhs_count = 1000;
  std::uint64_t cfhs_seed = 20240817;
  int mms_levels = 3;
  double uniq_delta = 1e-6;
  std::vector<int> sweep_modes{4, 8, 16};
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct IniEntry {
  std::string value;
  int line{};
};

using IniDocument = std::map<std::string, std::map<std::string, IniEntry>>;

inline IniDocument parse_ini(std::istream& in, const std::string& origin) {
  IniDocument doc;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
    if (!doc[section].emplace(key, IniEntry{value, lineno}).second)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                        section + "." + key + "'");
  }
  return doc;
}

inline double to_double(const std::string& section, const std::string& key,
                        const IniEntry& e) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != e.value.size() || e.value.empty())
    throw ConfigError("line " + std::to_string(e.line) + ": " + section + "." + key +
                      ": not a number: '" + e.value + "'");
  return v;
}

inline long long to_int(const std::string& section, const std::string& key,
                        const IniEntry& e) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(e.value, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != e.value.size() || e.value.empty())
    throw ConfigError("line " + std::to_string(e.line) + ": " + section + "." + key +
                      ": not an integer: '" + e.value + "'");
  return v;
}

}  // namespace detail

/// Parses the structured config document into a resolved JobConfig. Unknown
/// sections or keys are rejected; missing required keys are named in the
/// error; dt = "auto" and n_modes = "grid" resolve here.
inline JobConfig parse_config_text(std::istream& in, const std::string& origin) {
  using detail::IniEntry;
  auto doc = detail::parse_ini(in, origin);

  static const std::map<std::string, std::set<std::string>> kKnown = {
      {"domain", {"a", "b"}},
      {"grid", {"n"}},
      {"params", {"mu"}},
      {"time", {"T", "dt"}},
      {"scheme", {"name"}},
      {"galerkin", {"n_modes"}},
      {"init", {"preset", "table", "k", "A", "theta0", "c", "theta_floor"}},
      {"output", {"csv", "json", "sample_every"}},
      {"guards", {"theta_floor_guard"}},
      {"cfhs", {"count", "seed"}},
      {"mms", {"levels"}},
      {"uniq", {"delta"}},
      {"sweep", {"modes"}},
  };
  for (const auto& [section, entries] : doc) {
    const auto it = kKnown.find(section);
    if (it == kKnown.end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, e] : entries)
      if (!it->second.count(key))
        throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" +
                          section + "." + key + "'");
  }

  const auto require = [&](const std::string& section, const std::string& key) -> IniEntry {
    const auto sit = doc.find(section);
    if (sit == doc.end() || !sit->second.count(key))
      throw ConfigError("missing required key '" + section + "." + key + "'");
    return sit->second.at(key);
  };
  const auto lookup = [&](const std::string& section, const std::string& key) -> const IniEntry* {
    const auto sit = doc.find(section);
    if (sit == doc.end()) return nullptr;
    const auto kit = sit->second.find(key);
    return kit == sit->second.end() ? nullptr : &kit->second;
  };

  JobConfig job;
  RunSpec& spec = job.spec;
  spec.a = detail::to_double("domain", "a", require("domain", "a"));
  spec.b = detail::to_double("domain", "b", require("domain", "b"));
  spec.n = static_cast<int>(detail::to_int("grid", "n", require("grid", "n")));
  spec.mu = detail::to_double("params", "mu", require("params", "mu"));
  spec.horizon = detail::to_double("time", "T", require("time", "T"));

  if (const auto* e = lookup("scheme", "name")) {
    if (e->value == "rk4")
      spec.scheme = Scheme::RK4;
    else if (e->value == "imex-cn")
      spec.scheme = Scheme::ImexCN;
    else
      throw ConfigError("line " + std::to_string(e->line) +
                        ": scheme.name must be 'rk4' or 'imex-cn', got '" + e->value + "'");
  }

  const Grid g = make_grid(spec.a, spec.b, spec.n);  // validates domain/grid early
  if (const auto* e = lookup("time", "dt"); e && e->value != "auto") {
    const double dt = detail::to_double("time", "dt", *e);
    if (!(dt > 0.0))
      throw ConfigError("line " + std::to_string(e->line) + ": time.dt must be positive");
    spec.dt = dt;
  } else {
    spec.dt = stable_dt(g, spec.scheme, spec.horizon);
  }

  if (const auto* e = lookup("galerkin", "n_modes"); e && e->value != "grid")
    spec.n_modes = static_cast<int>(detail::to_int("galerkin", "n_modes", *e));

  if (const auto* e = lookup("init", "preset")) spec.preset_name = e->value;
  if (const auto* e = lookup("init", "table")) spec.table_path = e->value;
  for (const std::string key : {"k", "A", "theta0", "c", "theta_floor"})
    if (const auto* e = lookup("init", key))
      spec.preset_params[key] = detail::to_double("init", key, *e);

  if (const auto* e = lookup("output", "csv")) job.csv_path = e->value;
  if (const auto* e = lookup("output", "json")) job.json_path = e->value;
  if (const auto* e = lookup("output", "sample_every"))
    spec.sample_every = static_cast<int>(detail::to_int("output", "sample_every", *e));

  if (const auto* e = lookup("guards", "theta_floor_guard"))
    spec.theta_floor_guard = detail::to_double("guards", "theta_floor_guard", *e);

  if (const auto* e = lookup("cfhs", "count"))
    job.cfhs_count = static_cast<int>(detail::to_int("cfhs", "count", *e));
  if (const auto* e = lookup("cfhs", "seed"))
    job.cfhs_seed = static_cast<std::uint64_t>(detail::to_int("cfhs", "seed", *e));
  if (const auto* e = lookup("mms", "levels"))
    job.mms_levels = static_cast<int>(detail::to_int("mms", "levels", *e));
  if (const auto* e = lookup("uniq", "delta"))
    job.uniq_delta = detail::to_double("uniq", "delta", *e);
  if (const auto* e = lookup("sweep", "modes")) {
    job.sweep_modes.clear();
    std::string token;
    std::istringstream ts(e->value);
    while (std::getline(ts, token, ',')) {
      std::istringstream ws(token);
      std::string word;
      while (ws >> word)
        job.sweep_modes.push_back(
            static_cast<int>(detail::to_int("sweep", "modes", IniEntry{word, e->line})));
    }
    if (job.sweep_modes.empty())
      throw ConfigError("line " + std::to_string(e->line) + ": sweep.modes is empty");
  }

  spec.validate();
  return job;
}

inline JobConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config_text(in, path);
}

}  // namespace thermoelast
