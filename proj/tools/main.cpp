#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"projdyn: numerical laboratory for projective dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  projdyn::cli::Overrides overrides;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  double rtol = 0;

  auto add_common = [&](CLI::App* cmd, bool config_required) {
    auto* opt = cmd->add_option("--config", config_path, "configuration file (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { overrides.seed = seed; });
    cmd->add_option("--rtol", rtol, "override the integrator tolerances")
        ->each([&](const std::string&) { overrides.rtol = rtol; });
  };

  CLI::App* simulate = app.add_subcommand("simulate", "integrate a configured system");
  add_common(simulate, true);
  CLI::App* project =
      app.add_subcommand("project", "centrally project a stored trajectory");
  add_common(project, true);
  CLI::App* verify =
      app.add_subcommand("verify", "run the seeded verification suite");
  add_common(verify, false);
  CLI::App* correspond = app.add_subcommand(
      "correspond", "exercise the Jacobi/intermediate/Neumann correspondence");
  add_common(correspond, true);

  CLI11_PARSE(app, argc, argv);
  overrides.out_dir = out_dir;

  if (simulate->parsed()) {
    return projdyn::cli::cmd_simulate(config_path, overrides);
  }
  if (project->parsed()) {
    return projdyn::cli::cmd_project(config_path, overrides);
  }
  if (verify->parsed()) {
    return projdyn::cli::cmd_verify(config_path, overrides);
  }
  return projdyn::cli::cmd_correspond(config_path, overrides);
}
