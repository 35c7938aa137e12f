#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldr/cli_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"AdaLASSO-regularized linear decision rules for hydrothermal dispatch"};
  app.require_subcommand(1);

  ldr::CliOptions opt;
  double lambda = 0.0;
  uint64_t seed = 0;
  int jobs = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "run config file")->required();
    cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_option("--jobs", jobs, "parallel workers");
    cmd->add_option("--out", opt.out_dir, "output directory override");
  };

  auto* gen = app.add_subcommand("gen-scenarios", "sample inflow scenario sets to CSV");
  add_common(gen);

  auto* est = app.add_subcommand("estimate", "estimate an LDR policy for one lambda");
  add_common(est);
  est->add_option("--lambda", lambda, "AdaLASSO penalty (0 = non-regularized)");

  auto* sim = app.add_subcommand("simulate", "roll a policy over out-of-sample scenarios");
  add_common(sim);
  sim->add_option("--policy", opt.policy_path, "policy CSV path")->required();

  auto* sweep = app.add_subcommand("sweep", "lambda grid search by out-of-sample cost");
  add_common(sweep);
  sweep->add_option("--grid", opt.grid, "lambda grid override");

  auto* report = app.add_subcommand("report", "consolidate a run directory into tables");
  report->add_option("--run-dir", opt.run_dir, "directory with sweep/estimate outputs")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ldr::kExitConfig;
  }

  CLI::App* active = app.get_subcommands().front();
  auto given = [&](const std::string& name) {
    const CLI::Option* o = active->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--lambda")) opt.lambda = lambda;
  if (given("--seed")) opt.seed = seed;
  if (given("--jobs")) opt.jobs = jobs;

  return ldr::run_command(active->get_name(), opt);
}
