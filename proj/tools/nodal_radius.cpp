// nodal_radius: command-line front end for the nodal radius checks.
//
//   nodal_radius analyze-trig --input f.json --out outdir --svg
//   nodal_radius --cmd suite --seed 7 --resolution 128
//
// Thread count is capped by NODAL_RADIUS_THREADS.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nodal/app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Sign-free ball and mean-value identity checks"};
  nodal::app::RunConfig cfg;
  std::string positional;
  std::string input;
  cli.add_option("--cmd", cfg.command, "command: analyze-trig, analyze-sphere, analyze-mix, verify-identity, sharpness, suite");
  cli.add_option("command", positional, "command (alternative to --cmd)");
  cli.add_option("--input", input, "instance file (JSON)");
  cli.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  cli.add_option("--resolution", cfg.resolution, "grid samples per axis")->capture_default_str();
  cli.add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
  cli.add_flag("--svg", cfg.emit_svg, "write SVG sign plots");
  std::map<std::string, double> tols = nodal::app::default_tolerances();
  for (auto& [name, value] : tols) {
    cli.add_option("--tol." + name, value, "tolerance '" + name + "'")->capture_default_str();
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return 2;
  }
  if (cfg.command.empty()) cfg.command = positional;
  if (!positional.empty() && positional != cfg.command) {
    std::cerr << "error: command: given twice ('" << cfg.command << "' and '" << positional << "')\n";
    return 2;
  }
  if (!input.empty()) cfg.input_path = input;
  cfg.tolerances = tols;
  return nodal::app::run(cfg, std::cerr);
}
