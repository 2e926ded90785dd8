#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "thermoelast/cli.hpp"

using namespace thermoelast;

namespace {

const char* kMinimalDoc =
    "[domain]\n"
    "a = 0\n"
    "b = 1\n"
    "[grid]\n"
    "n = 101\n"
    "[params]\n"
    "mu = 1\n"
    "[time]\n"
    "T = 1\n";

JobConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config_text(in, "<test>");
}

std::string write_temp_config(const std::string& text, const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "telab_test_cli";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("minimal config resolves defaults") {
  const JobConfig job = parse_text(kMinimalDoc);
  CHECK(job.spec.n == 101);
  CHECK(job.spec.mu == 1.0);
  CHECK(job.spec.scheme == Scheme::ImexCN);
  CHECK_FALSE(job.spec.n_modes.has_value());
  CHECK(job.spec.preset_name == "rest");
  REQUIRE(job.spec.dt.has_value());
  // auto dt for imex-cn: 0.5 dx snapped so T/dt is an integer
  CHECK(*job.spec.dt <= 0.5 * 0.01 + 1e-15);
  const double steps = 1.0 / *job.spec.dt;
  CHECK(steps == doctest::Approx(std::round(steps)).epsilon(1e-12));
}

TEST_CASE("auto dt respects the RK4 parabolic limit") {
  const JobConfig job = parse_text(std::string(kMinimalDoc) + "[scheme]\nname = rk4\n");
  CHECK(*job.spec.dt <= 0.25 * 0.01 * 0.01 + 1e-18);
}

TEST_CASE("config rejections name the offender") {
  // missing required key
  try {
    parse_text("[domain]\na = 0\nb = 1\n[grid]\nn = 101\n[time]\nT = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("params.mu") != std::string::npos);
  }
  // unknown key
  CHECK_THROWS_AS(parse_text(std::string(kMinimalDoc) + "[grid2]\nn = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_text(std::string(kMinimalDoc) + "[output]\nxyz = 1\n"),
                  ConfigError);
  // bad grid flows through make_grid's precondition
  CHECK_THROWS_AS(
      parse_text("[domain]\na = 0\nb = 1\n[grid]\nn = 2\n[params]\nmu = 0\n[time]\nT = 1\n"),
      ConfigError);
  // malformed lines carry line numbers
  try {
    parse_text("[domain]\na 0\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  // bad scheme name
  CHECK_THROWS_AS(parse_text(std::string(kMinimalDoc) + "[scheme]\nname = euler\n"),
                  ConfigError);
}

TEST_CASE("effective config round trip reproduces the spec") {
  const JobConfig job = parse_text(std::string(kMinimalDoc) +
                                   "[scheme]\nname = rk4\n[galerkin]\nn_modes = 8\n"
                                   "[init]\npreset = bump\nc = 2\nA = 0.5\n"
                                   "[output]\nsample_every = 7\n"
                                   "[guards]\ntheta_floor_guard = 0.25\n");
  const JobConfig again = parse_text(effective_config(job));
  CHECK(again.spec.a == job.spec.a);
  CHECK(again.spec.b == job.spec.b);
  CHECK(again.spec.n == job.spec.n);
  CHECK(again.spec.mu == job.spec.mu);
  CHECK(again.spec.horizon == job.spec.horizon);
  CHECK(again.spec.dt == job.spec.dt);
  CHECK(again.spec.scheme == job.spec.scheme);
  CHECK(again.spec.n_modes == job.spec.n_modes);
  CHECK(again.spec.preset_name == job.spec.preset_name);
  CHECK(again.spec.preset_params == job.spec.preset_params);
  CHECK(again.spec.sample_every == job.spec.sample_every);
  CHECK(again.spec.theta_floor_guard == job.spec.theta_floor_guard);
  CHECK(again.sweep_modes == job.sweep_modes);
  CHECK(again.cfhs_seed == job.cfhs_seed);
}

TEST_CASE("fmt17 round-trips doubles exactly") {
  for (double v : {1.0 / 3.0, M_PI, 2.5e-14, -7.125, 0.1}) {
    CHECK(std::stod(fmt17(v)) == v);
  }
}

TEST_CASE("csv schema and determinism") {
  RunSpec spec;
  spec.n = 51;
  spec.mu = 1.0;
  spec.horizon = 0.1;
  spec.preset_name = "bump";
  spec.preset_params = {{"c", 2.0}, {"A", 0.5}};
  spec.sample_every = 4;
  const Trajectory traj = run(spec);
  const std::string csv = trajectory_csv(traj);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "t,E_kin,E_el,E_th,E_total,F,L,D,G,min_theta,max_theta,logtheta_Linf,"
        "logtheta_H1,residual");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == traj.samples.size());
  CHECK(csv == trajectory_csv(run(spec)));  // byte-identical re-run
}

TEST_CASE("atomic_write leaves no temp file and is re-emittable") {
  const auto dir = std::filesystem::temp_directory_path() / "telab_test_cli";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "atomic.txt").string();
  atomic_write(path, "hello\n");
  atomic_write(path, "hello\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "hello\n");
}

TEST_CASE("dispatch exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "telab_test_cli";
  const std::string out_dir = (dir / "out").string();

  const std::string ok_path = write_temp_config(
      std::string(kMinimalDoc) + "[output]\nsample_every = 20\n", "ok.ini");
  CHECK(dispatch_file("run", ok_path, out_dir) == kExitOk);
  CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / "trajectory.csv"));
  CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / "summary.json"));
  CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / "effective_config.ini"));

  // invalid positivity at config time
  const std::string bad_path = write_temp_config(
      std::string(kMinimalDoc) + "[init]\npreset = bump\nc = 1\nA = 2\n", "bad.ini");
  CHECK(dispatch_file("run", bad_path, out_dir) == kExitConfigError);

  // guard above the initial temperature trips immediately
  const std::string guard_path = write_temp_config(
      std::string(kMinimalDoc) + "[guards]\ntheta_floor_guard = 5\n", "guard.ini");
  CHECK(dispatch_file("run", guard_path, out_dir) == kExitGuardTripped);

  CHECK(dispatch_file("run", "no_such_config.ini", out_dir) == kExitConfigError);
  CHECK(dispatch_file("frobnicate", ok_path, out_dir) == kExitConfigError);
}
