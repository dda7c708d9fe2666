// twoeq: command-line front end for the two-equilibrium regression model.
//
//   twoeq <command> [--config FILE] [--key value ...] [--seed S] [--out DIR] [--svg]
//
// Exit status: 0 success, 1 invalid input or I/O failure, 2 internal error.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "twoeq/cli/commands.hpp"
#include "twoeq/cli/config.hpp"
#include "twoeq/cli/output.hpp"
#include "twoeq/errors.hpp"

namespace {

using namespace twoeq;

const char* describe(cli::Command c) {
  switch (c) {
    case cli::Command::rfi: return "Sample the regression increment curve";
    case cli::Command::evolve: return "Iterate the deterministic evolution to its limit";
    case cli::Command::simulate: return "Exact binomial simulation of the experiment";
    case cli::Command::sa: return "Stochastic approximation runs";
    case cli::Command::clt: return "One-step martingale increments against the normal law";
    case cli::Command::diffusion: return "Discrete-continuous scheme against Euler-Maruyama";
    case cli::Command::classify: return "Zone of a single state";
  }
  return "";
}

struct Invocation {
  cli::Command command;
  std::optional<std::string> config_path;
  std::map<std::string, std::string> values;
  bool svg = false;
};

int run(const Invocation& inv) {
  std::string text = "{}";
  if (inv.config_path) text = cli::read_file(*inv.config_path);
  cli::Overrides overrides;
  for (const auto& [key, value] : inv.values) {
    if (!value.empty()) overrides[key] = value;
  }
  if (inv.svg) overrides["svg"] = "true";
  const cli::RunConfig cfg = cli::parse_config_text(inv.command, text, overrides);
  const nlohmann::json summary = cli::run_command(cfg);
  if (cfg.command == cli::Command::classify) {
    std::cout << nlohmann::json{{"zone", summary.at("zone")}}.dump() << "\n";
  } else {
    std::cout << summary.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-equilibrium regression model: evolution, simulation and limits"};
  app.require_subcommand(1);
  std::string field_notes = "Config fields (JSON keys and --key flags):\n";
  for (const auto& [key, help] : cli::config_field_help()) {
    field_notes += "  " + key + ": " + help + "\n";
  }
  app.footer(field_notes);

  std::vector<Invocation> invocations;
  invocations.reserve(7);
  for (cli::Command c : {cli::Command::rfi, cli::Command::evolve,
                         cli::Command::simulate, cli::Command::sa,
                         cli::Command::clt, cli::Command::diffusion,
                         cli::Command::classify}) {
    invocations.push_back(Invocation{c, std::nullopt, {}, false});
    Invocation& inv = invocations.back();
    CLI::App* sub = app.add_subcommand(std::string(cli::to_string(c)), describe(c));
    sub->add_option("--config", inv.config_path, "JSON config or a previous summary.json");
    sub->add_flag("--svg", inv.svg, "Also write plot.svg");
    for (const auto& [key, help] : cli::config_field_help()) {
      if (key == "svg" || key == "command") continue;
      sub->add_option("--" + key, inv.values[key], help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  for (const Invocation& inv : invocations) {
    if (!app.got_subcommand(std::string(cli::to_string(inv.command)))) continue;
    try {
      return run(inv);
    } catch (const cli::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    } catch (const ValidationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    } catch (const DomainError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    } catch (const cli::IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "internal error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
