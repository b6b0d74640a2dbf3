#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Geometric PID quadrotor simulator and gain certifier"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  bool strict = false;
  std::string name;

  auto* sim = app.add_subcommand("simulate", "Run a scenario config and write its CSV log");
  sim->add_option("config", config_path, "Scenario config file")->required();
  sim->add_option("--set", overrides, "Override section.key=value")->allow_extra_args(false);
  sim->add_option("--out", out_path, "CSV output path");

  auto* cert = app.add_subcommand("certify", "Print the gain certificate of a config");
  cert->add_option("config", config_path, "Scenario config file")->required();
  cert->add_option("--set", overrides, "Override section.key=value")->allow_extra_args(false);
  cert->add_flag("--strict", strict, "Exit 3 unless every condition passes");

  auto* bi = app.add_subcommand("builtin", "Run a built-in scenario");
  bi->add_option("name", name, "flip, flip-no-integral or euler-attitude")->required();
  bi->add_option("--out", out_path, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return geomctl::cli::kExitConfig;
  }

  const std::optional<std::string> out =
      out_path.empty() ? std::nullopt : std::optional<std::string>(out_path);
  if (sim->parsed()) return geomctl::cli::simulate(config_path, overrides, out, std::cout, std::cerr);
  if (cert->parsed()) return geomctl::cli::certify(config_path, overrides, strict, std::cout, std::cerr);
  return geomctl::cli::builtin(name, out, std::cout, std::cerr);
}
