#include <string>

#include <CLI11.hpp>

#include "rif/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rif: grow recursive trees with independent fitnesses, solve the "
               "Malthusian equation, evaluate limit laws, and verify them "
               "against simulation"};
  app.require_subcommand(1);

  struct SubState {
    std::string config;
    rif::CliOverrides ov;
  };

  const std::vector<std::string> names = {"solve", "limits", "simulate", "compare",
                                          "phase"};
  const std::vector<std::string> descs = {
      "classify the regime and solve m(alpha) = 1",
      "evaluate the closed-form degree and edge laws",
      "grow replica trees and write empirical summaries",
      "run the full verification pipeline with a pass/fail verdict",
      "sweep a scalar factor on h and report the phase per value"};

  std::vector<SubState> state(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", state[i].config, "run-config JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", state[i].ov.seed, "override the config seed");
    sub->add_option("--threads", state[i].ov.threads, "replica worker threads");
    sub->add_option("--out", state[i].ov.out_dir, "output directory");
    if (names[i] == "simulate")
      sub->add_flag("--dump-tree", state[i].ov.dump_tree,
                    "export the replica-0 edge list");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints the message / help text
    return rc == 0 ? 0 : rif::kExitUsage;
  }

  for (std::size_t i = 0; i < names.size(); ++i)
    if (app.get_subcommand(names[i])->parsed())
      return rif::run_cli(names[i], state[i].config, state[i].ov);
  return rif::kExitUsage;
}
