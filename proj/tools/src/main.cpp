#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

struct Invocation {
  std::string config;
  cnls::cli::CommandOptions options;
  std::uint64_t seed = 0;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Invocation& inv) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("config", inv.config, "Config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", inv.seed, "Override the random seed");
  sub->add_option("--out-dir", inv.options.out_dir, "Directory for output files");
  sub->add_flag("--quiet", inv.options.quiet, "Suppress progress output");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of coupled nonlinear Schrodinger systems on radial grids"};
  app.require_subcommand(1);
  Invocation inv;
  auto* solve = add_command(app, "solve", "Minimise the energy at fixed masses", inv);
  auto* certify = add_command(app, "certify", "Search for a negative-energy test function", inv);
  auto* check = add_command(app, "check", "Sample the coupling and potential hypotheses", inv);
  auto* rearrange = add_command(app, "rearrange", "Schwarz-symmetrise a profile CSV", inv);
  rearrange->add_option("--input", inv.options.input, "Profile CSV (r,u_1,...)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cnls::cli::kError;
  }

  using namespace cnls::cli;
  try {
    for (auto* sub : {solve, certify, check, rearrange}) {
      if (sub->parsed() && sub->count("--seed") > 0) inv.options.seed = inv.seed;
    }
    auto config = load_config(inv.config);
    if (solve->parsed()) return cmd_solve(std::move(config), inv.options, std::cout);
    if (certify->parsed()) return cmd_certify(config, inv.options, std::cout);
    if (check->parsed()) return cmd_check(std::move(config), inv.options, std::cout);
    return cmd_rearrange(config, inv.options, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}
