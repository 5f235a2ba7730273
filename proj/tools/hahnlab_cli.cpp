// Command-line front end: run a verification scenario, list the registry, or
// parse a series literal in a scenario's name environment.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hahnlab/paperlab.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact valuation-theory scenario verifier"};
  app.require_subcommand(1);

  hahnlab::ScenarioConfig config;
  std::string scenario;
  std::string format = "text";
  std::string expr;

  CLI::App* verify = app.add_subcommand("verify", "run one scenario and report per-check results");
  verify->add_option("--scenario", scenario, "scenario id (see list-scenarios)")->required();
  verify->add_option("--prime", config.prime, "field characteristic")->capture_default_str();
  verify->add_option("--levels", config.levels, "family depth, clamped to [2, 6]")
      ->capture_default_str();
  verify->add_option("--budget", config.budget, "term budget per stream enumeration")
      ->capture_default_str();
  verify->add_option("--format", format, "output format: text or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* list = app.add_subcommand("list-scenarios", "print every scenario id with a summary");

  CLI::App* parse = app.add_subcommand("parse", "parse a series literal and print its leading terms");
  parse->add_option("--expr", expr, "series literal, e.g. \"t^(-1) + 2*t^(-1/3)\"")->required();
  parse->add_option("--scenario", scenario, "name environment to parse in")
      ->default_val("example-5-1-1");
  parse->add_option("--prime", config.prime, "field characteristic")->capture_default_str();
  parse->add_option("--levels", config.levels, "family depth, clamped to [2, 6]")
      ->capture_default_str();
  parse->add_option("--budget", config.budget, "term budget per stream enumeration")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      hahnlab::Report rep = hahnlab::run_scenario(scenario, config);
      std::cout << hahnlab::emit_report(rep, format);
      return hahnlab::report_exit_code(rep);
    }
    if (list->parsed()) {
      for (const std::string& id : hahnlab::scenario_ids())
        std::cout << id << "\n    " << hahnlab::scenario_blurb(id) << "\n";
      return 0;
    }
    if (parse->parsed()) {
      hahnlab::HahnSeries s = hahnlab::parse_series_literal(expr, scenario, config);
      std::cout << s.str(12) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
