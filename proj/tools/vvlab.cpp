#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vvlab/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Vanishing-viscosity laboratory for the isentropic gas equations"};
  app.require_subcommand(1, 1);

  std::string config;
  vvlab::CommandOptions opt;
  const char* names[][2] = {
      {"run-ns", "Run the viscous solver and write the trajectory and manifest"},
      {"run-euler", "Run the Godunov scheme on the raw initial data"},
      {"riemann", "Solve the Riemann problem between the far-field states"},
      {"entropy-audit", "Entropy inequality audit under grid refinement"},
      {"kernel-check", "Entropy kernel, quadrature and pair checks"},
      {"vv-study", "Vanishing-viscosity ladder study"},
  };
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "INI configuration file (defaults when omitted)");
    sub->add_option("--output", opt.output, "Output directory (overrides study.output_dir)");
    sub->add_option("--jobs", opt.jobs, "Worker threads for the ladder rungs")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return vvlab::kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return vvlab::run_command(name, config, opt, std::cout, std::cerr);
}
