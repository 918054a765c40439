#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "trafficflow/cli/commands.hpp"
#include "trafficflow/cli/heatmap.hpp"

using namespace trafficflow;

int main(int argc, char** argv) {
  CLI::App app{"Traffic equations for fluid networks with overflow"};
  app.require_subcommand(1);

  std::string file;
  std::string kind_name = "overflow";
  bool best_effort = false;
  auto* solve = app.add_subcommand("solve", "solve a traffic equation for a network file");
  solve->add_option("file", file, "network JSON file")->required();
  solve->add_option("--kind", kind_name, "jackson, gm or overflow")
      ->check(CLI::IsMember({"jackson", "gm", "overflow"}));
  solve->add_flag("--best-effort", best_effort, "run the overflow solver without certifying Condition 2");

  auto* check = app.add_subcommand("check", "class structure, NI/FD and Condition 2");
  check->add_option("file", file, "network JSON file")->required();

  auto* oracle = app.add_subcommand("oracle", "enumerate every stable set (n <= 24)");
  oracle->add_option("file", file, "network JSON file")->required();

  cli::HeatmapOptions heat;
  std::string prefix = "heatmap";
  auto* heatmap = app.add_subcommand("heatmap", "sweep delta and epsilon over the cell-grid family");
  heatmap->add_option("--m", heat.m, "grid side (n = 4 m^2)")->check(CLI::Range(2, 1000));
  heatmap->add_option("--step", heat.step, "grid step in (0, 0.5]");
  heatmap->add_option("--jobs", heat.jobs, "worker threads, 0 for all cores");
  heatmap->add_option("--out", prefix, "output prefix for .csv and .svg");
  heatmap->add_flag("--best-effort", heat.best_effort, "skip the Condition 2 gate");

  std::size_t n_max = 30;
  auto* worstcase = app.add_subcommand("worstcase", "check the inner iteration count on the worst-case family");
  worstcase->add_option("n-max", n_max, "largest n")->check(CLI::PositiveNumber);

  cli::GenRequest gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a generated network");
  gen_cmd->add_option("name", gen.name, "example1, example2, example3, example4 or random")
      ->required()
      ->check(CLI::IsMember({"example1", "example2", "example3", "example4", "random"}));
  gen_cmd->add_option("--m", gen.grid.m, "example1 grid side");
  gen_cmd->add_option("--delta", gen.grid.delta, "example1 delta");
  gen_cmd->add_option("--epsilon", gen.grid.epsilon, "example1 epsilon");
  gen_cmd->add_option("--n", gen.n, "example2 size, random size");
  gen_cmd->add_option("--alpha1", gen.alpha1, "example4 arrival rate at node 1");
  gen_cmd->add_option("--seed", gen.random.seed, "random seed");
  gen_cmd->add_option("--p-density", gen.random.p_density, "random routing density");
  gen_cmd->add_option("--q-density", gen.random.q_density, "random overflow density");
  gen_cmd->add_option("--leak", gen.random.leak, "random row leak");
  gen_cmd->add_option("--out", gen.out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInputError;
  }

  if (*solve) {
    static const std::map<std::string, EquationKind> kinds = {
        {"jackson", EquationKind::Jackson},
        {"gm", EquationKind::GoodmanMassey},
        {"overflow", EquationKind::Overflow}};
    return cli::cmd_solve(file, kinds.at(kind_name), best_effort, std::cout, std::cerr);
  }
  if (*check) return cli::cmd_check(file, std::cout, std::cerr);
  if (*oracle) return cli::cmd_oracle(file, std::cout, std::cerr);
  if (*heatmap) return cli::cmd_heatmap(heat, prefix, std::cout, std::cerr);
  if (*worstcase) return cli::cmd_worstcase(n_max, std::cout, std::cerr);
  if (*gen_cmd) {
    gen.random.n = gen.n;
    return cli::cmd_gen(gen, std::cout, std::cerr);
  }
  return cli::kExitInputError;
}
