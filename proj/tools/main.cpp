#include <iostream>

#include <CLI11.hpp>

#include "foldcycle_app/run.hpp"

int main(int argc, char** argv) {
  using foldcycle::app::RunOptions;
  CLI::App app{"Monodromic tangential singularities of planar Filippov fields: classification, unfoldings, "
               "pseudo-Hopf cycles"};
  RunOptions opts;
  std::string config;
  std::string shift;
  std::string out;
  std::uint64_t seed = 0;

  app.add_option("command", opts.command, "Command to run")
      ->required()
      ->check(CLI::IsMember(foldcycle::app::commands()));
  app.add_option("--config", config, "Scenario file (JSON)")->required();
  auto* b_opt = app.add_option("--b", "Shift parameter b");
  auto* eps_opt = app.add_option("--epsilon", "Unfolding scale epsilon");
  app.add_option("--shift", shift, "Shift convention")->check(CLI::IsMember({"minus", "plus"}));
  app.add_option("--out", out, "Output directory (overrides the scenario)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized property draws");
  app.add_flag("--dump-normalized", opts.dump_normalized, "Also write <name>.scenario.json, fully normalized");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : foldcycle::app::kExitInput;
  }

  opts.config = config;
  if (*b_opt) opts.b = b_opt->as<double>();
  if (*eps_opt) opts.epsilon = eps_opt->as<double>();
  if (!shift.empty()) opts.shift = foldcycle::parse_shift_convention(shift);
  if (!out.empty()) opts.out = out;
  if (*seed_opt) opts.seed = seed;
  return foldcycle::app::run(opts, std::cerr);
}
