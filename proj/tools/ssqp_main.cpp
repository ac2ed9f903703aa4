#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ssqp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Step-search SQP solver and benchmark harness"};
  app.require_subcommand(1);

  ssqp::CliConfig cfg;
  std::string config_path;
  std::string problem_file;
  std::string problem;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.output_dir, "Output directory");
    sub->add_option("--seed", seed, "Base seed; replaces oracle.seed");
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--set", cfg.overrides, "Override section.key=value")->take_all();
  };

  CLI::App* run = app.add_subcommand("run", "Solve one problem");
  add_common(run);
  run->add_option("--problem", problem, "Built-in problem name");
  run->add_option("--problem-file", problem_file, "Quadratic program JSON file");

  CLI::App* bench = app.add_subcommand("bench", "Run the experiment grid");
  add_common(bench);
  bench->add_option("--problem", problem, "Restrict the grid to one built-in problem");
  bench->add_option("--problem-file", problem_file, "Restrict the grid to one QP file");

  CLI::App* profile = app.add_subcommand("profile", "Build performance profiles from --out");
  add_common(profile);

  CLI::App* check = app.add_subcommand("check-grad", "Finite-difference derivative check");
  add_common(check);
  check->add_option("--problem", problem, "Built-in problem name");
  check->add_option("--problem-file", problem_file, "Quadratic program JSON file");

  CLI::App* list = app.add_subcommand("list-problems", "List built-in problems");
  (void)list;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ssqp::kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.subcommand = *ssqp::parse_subcommand(chosen->get_name());
  if (!config_path.empty()) cfg.config_path = config_path;
  if (!problem.empty()) cfg.problem = problem;
  if (!problem_file.empty()) cfg.problem_file = problem_file;
  if (const CLI::Option* opt = chosen->get_option_no_throw("--seed"); opt && opt->count() > 0) {
    cfg.seed = seed;
  }

  return ssqp::dispatch(cfg, std::cout, std::cerr);
}
