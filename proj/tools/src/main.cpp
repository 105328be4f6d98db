#include <iostream>

#include <CLI11.hpp>

#include "mgsched_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace mgsched::cli;
  CLI::App app{"Microgrid electricity scheduler"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::uint64_t run_seed = 0;
  auto* run = app.add_subcommand("run", "Simulate one policy over generated or CSV traces");
  run->add_option("--config", run_args.config, "Run configuration (JSON)")->required();
  run->add_option("--wind", run_args.wind, "Generation CSV");
  run->add_option("--prices", run_args.prices, "Price CSV");
  run->add_option("--demand", run_args.demand, "Demand CSV");
  run->add_option("--out", run_args.out, "Output prefix")->required();
  auto* run_seed_opt = run->add_option("--seed", run_seed, "Override the config seed");
  run->add_flag("--curtail", run_args.curtail, "Discard surplus no sink can absorb");

  std::string sweep_config;
  std::string sweep_out;
  std::vector<double> fractions;
  auto* sweep = app.add_subcommand("sweep-v", "Run the controller at several fractions of V_max");
  sweep->add_option("--config", sweep_config)->required();
  sweep->add_option("--fractions", fractions, "Comma-separated fractions in (0, 1]")->required()->delimiter(',');
  sweep->add_option("--out", sweep_out)->required();

  std::string compare_config;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Run the controller and the heuristic benchmark on one trace");
  compare->add_option("--config", compare_config)->required();
  compare->add_option("--out", compare_out)->required();

  std::string validate_config;
  int trials = 100;
  std::uint64_t validate_seed = 1;
  double v_scale = 1.0;
  auto* validate = app.add_subcommand("validate", "Run the randomized invariant suites");
  validate->add_option("--config", validate_config)->required();
  validate->add_option("--trials", trials, "Number of randomized trials")->capture_default_str();
  validate->add_option("--seed", validate_seed)->capture_default_str();
  validate->add_option("--v-scale", v_scale)->group("");

  std::string gen_config;
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen-traces", "Write synthetic traces as CSV");
  gen->add_option("--config", gen_config)->required();
  gen->add_option("--out", gen_out)->required();
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (run->parsed()) {
    if (*run_seed_opt) run_args.seed = run_seed;
    return cmd_run(run_args, std::cout, std::cerr);
  }
  if (sweep->parsed()) return cmd_sweep_v(sweep_config, fractions, sweep_out, std::cout, std::cerr);
  if (compare->parsed()) return cmd_compare(compare_config, compare_out, std::cout, std::cerr);
  if (validate->parsed()) return cmd_validate(validate_config, trials, validate_seed, v_scale, std::cout, std::cerr);
  std::optional<std::uint64_t> seed;
  if (*gen_seed_opt) seed = gen_seed;
  return cmd_gen_traces(gen_config, gen_out, seed, std::cout, std::cerr);
}
