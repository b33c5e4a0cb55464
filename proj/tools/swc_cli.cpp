#include <iostream>

#include "CLI11.hpp"
#include "switchcontrol/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Switching, sparse and multi-bang optimal control with semismooth Newton"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto load = [&]() {
    swc::RunConfig cfg = config_path.empty() ? swc::parse_config_text("") : swc::load_config(config_path);
    if (!out_dir.empty()) cfg.out = out_dir;
    return cfg;
  };

  auto* run = app.add_subcommand("run", "solve one configuration and write report.json, control.csv, state.csv");
  run->add_option("--config", config_path, "flat YAML config file");
  run->add_option("--out", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "solve once per value of sweep_betas and write sweep.csv");
  sweep->add_option("--config", config_path, "flat YAML config file");
  sweep->add_option("--out", out_dir, "output directory");

  auto* table = app.add_subcommand("prox-table", "tabulate gamma-regions and h_gamma on a grid (regions.csv)");
  table->add_option("--config", config_path, "flat YAML config file");
  table->add_option("--out", out_dir, "output directory");

  swc::verify::Options vopts;
  auto* verify = app.add_subcommand("verify", "run the oracle and property suites");
  verify->add_option("--seed", vopts.seed, "random seed");
  verify->add_option("--count", vopts.count, "random draws per suite")->check(CLI::NonNegativeNumber);
  verify->add_option("--corrupt-threshold", vopts.threshold_scale, "scale the switching threshold (fault injection)")
      ->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return swc::cmd_verify(vopts, std::cout);
    const swc::RunConfig cfg = load();
    if (*run) return swc::cmd_run(cfg, std::cout);
    if (*sweep) return swc::cmd_sweep(cfg, std::cout);
    if (*table) return swc::cmd_prox_table(cfg, std::cout);
  } catch (const swc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return swc::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return swc::kExitAborted;
  }
  return swc::kExitOk;
}
