#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wavelab/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wave-lab: exterior radial wave equation laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "scenario config file")->required();

  bool as_json = false;
  CLI::App* list = app.add_subcommand("list", "list scenario kinds");
  list->add_flag("--json", as_json, "machine-readable catalog");

  CLI::App* version = app.add_subcommand("version", "print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  if (run->parsed()) {
    const wavelab::ScenarioOutcome outcome = wavelab::run_scenario(config_path);
    if (outcome.exit_code != 0) std::cerr << outcome.message << "\n";
    return outcome.exit_code;
  }
  if (list->parsed()) {
    std::cout << wavelab::list_scenarios(as_json);
    return 0;
  }
  if (version->parsed()) {
    std::cout << "wave-lab " << wavelab::kVersion << "\n";
    return 0;
  }
  return 2;
}
