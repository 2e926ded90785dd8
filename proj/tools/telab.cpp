// telab: batch driver for the thermoelasticity verification lab.
//
//   telab <subcommand> --config <path> [--out-dir <path>] [--seed <int>]
//
// Subcommands: run, mms, uniq, sweep-galerkin, cfhs, fit-bound.
// Exit codes: 0 success, 1 usage/config error, 2 positivity guard tripped,
// 3 a check failed.

#include <optional>
#include <string>

#include <CLI11.hpp>

#include "thermoelast/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"thermoelasticity solver and verification lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;

  const char* names[] = {"run", "mms", "uniq", "sweep-galerkin", "cfhs", "fit-bound"};
  const char* descs[] = {
      "integrate the coupled system and emit trajectory diagnostics",
      "manufactured-solution convergence study",
      "perturbation-growth (uniqueness) experiment",
      "Galerkin mode-count sweep against the full-grid reference",
      "randomized 13/8 inequality sweep",
      "integrate, then fit the exponential envelope of the Lyapunov functional",
  };
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "config document")->required();
    sub->add_option("--out-dir", out_dir, "output directory (default: .)");
    sub->add_option("--seed", seed, "override the sweep seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : thermoelast::kExitConfigError;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  return thermoelast::dispatch_file(subcommand, config_path, out_dir, seed);
}
