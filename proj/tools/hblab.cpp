// hblab: command-line front end for the H(b) divergence laboratory.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "hblab/commands.hpp"
#include "hblab/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hblab - outer functions, de Branges-Rovnyak norms and divergence experiments"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  hblab::ConfigOverrides overrides;
  std::string format;
  std::string out_dir;

  for (const auto& name : hblab::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option_function<std::string>(
        "--config", [&](const std::string& p) { config_path = p; }, "JSON config file");
    sub->add_option("--out", out_dir, "output directory")
        ->each([&](const std::string& v) { overrides.output_dir = v; });
    // Typed callbacks: CLI11 rejects non-numeric text as a ParseError.
    sub->add_option_function<int>(
        "--precision-bits", [&](const int& v) { overrides.precision_bits = v; },
        "extended-precision mantissa bits");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& v) { overrides.seed = v; },
        "seed for random test polynomials");
    sub->add_option("--format", format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->each([&](const std::string& v) { overrides.format = v; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hblab::kExitConfigError;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  hblab::RunConfig cfg;
  try {
    cfg = hblab::resolve_config(config_path, overrides);
  } catch (const hblab::ConfigError& e) {
    std::cerr << "hblab: config error: " << e.what() << "\n";
    return hblab::kExitConfigError;
  }
  return hblab::run_command(verb, cfg);
}
