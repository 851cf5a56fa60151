#include "tippetop/commands.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <string>

namespace {

struct Args {
  std::string scenario;
  std::string out = ".";
  int threads = 1;
  std::uint64_t seed = tippetop::kSignatureSeed;
};

void add_common(CLI::App* cmd, Args& args) {
  cmd->add_option("--scenario", args.scenario, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "output directory (created if missing)");
  cmd->add_option("--threads", args.threads, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.seed, "seed for sampled admissible states");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tippe top rolling/sliding dynamics toolkit"};
  app.require_subcommand(1);
  Args args;

  auto* simulate = app.add_subcommand("simulate", "integrate one scenario to CSV");
  auto* scan = app.add_subcommand("stability-scan", "classify family members over grids");
  auto* smale = app.add_subcommand("smale", "family energy curves on the (C^2, E) plane");
  auto* portrait = app.add_subcommand("phase-portrait", "reduced trajectories over a grid");
  auto* check = app.add_subcommand("conservation-check",
                                   "claimed vs observed conserved integrals per model");
  for (auto* cmd : {simulate, scan, smale, portrait, check}) add_common(cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // malformed invocation is a validation error
  }

  try {
    const tippetop::Scenario sc = tippetop::load_scenario(args.scenario);
    tippetop::CommandOptions opt;
    opt.out = args.out;
    opt.threads = args.threads;
    opt.seed = args.seed;
    if (simulate->parsed()) tippetop::cmd_simulate(sc, opt);
    if (scan->parsed()) tippetop::cmd_stability_scan(sc, opt);
    if (smale->parsed()) tippetop::cmd_smale(sc, opt);
    if (portrait->parsed()) tippetop::cmd_phase_portrait(sc, opt);
    if (check->parsed()) tippetop::cmd_conservation_check(sc, opt);
    return 0;
  } catch (const tippetop::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {  // covers ValidationError
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
