// Command line front end: scenario execution, oracle comparison, sampling.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ultrarelax/errors.hpp"
#include "ultrarelax/scenario.hpp"
#include "ultrarelax/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t paths = 0;
  bool paths_set = false;
};

std::string default_out_dir() {
  const char* env = std::getenv("ULTRARELAX_OUT_DIR");
  return env && *env ? env : ".";
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_paths) {
  cmd->add_option("--config", args.config_path, "JSON config file (defaults are used if omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir,
                  "output directory (default: $ULTRARELAX_OUT_DIR, else the working directory)");
  cmd->add_option("--seed", args.seed, "override the sampler seed from the config")
      ->trigger_on_parse()
      ->each([&args](const std::string&) { args.seed_set = true; });
  if (with_paths)
    cmd->add_option("--paths", args.paths, "override the sampler path count from the config")
        ->trigger_on_parse()
        ->each([&args](const std::string&) { args.paths_set = true; });
}

ultrarelax::ScenarioConfig resolve_config(const CommonArgs& args, const std::string& fallback) {
  ultrarelax::ScenarioConfig cfg = args.config_path.empty()
                                       ? ultrarelax::default_config_for(fallback)
                                       : ultrarelax::load_config_file(args.config_path);
  if (args.seed_set) cfg.oracle.seed = args.seed;
  if (args.paths_set) cfg.oracle.paths = args.paths;
  return cfg;
}

int report(const ultrarelax::RunArtifacts& artifacts) {
  if (!artifacts.summary.empty()) std::cout << artifacts.summary;
  for (const auto& file : artifacts.files) std::cout << "wrote " << file << "\n";
  return artifacts.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ultrametric relaxation scenarios"};
  app.set_version_flag("--version", std::string(ultrarelax::version_string));
  app.require_subcommand(1);

  std::string init_scenario = "custom";
  std::string init_path;
  auto* init = app.add_subcommand("init", "write a default config file");
  init->add_option("scenario", init_scenario, "glass, protein, or custom")
      ->check(CLI::IsMember({"glass", "protein", "custom"}));
  init->add_option("--config", init_path, "where to write the config (default: stdout)");

  CommonArgs glass_args, protein_args, oracle_args, mc_args, custom_args;
  auto* glass = app.add_subcommand("glass", "run the cooling-sweep scenario");
  add_common(glass, glass_args, false);
  auto* protein = app.add_subcommand("protein", "run the folding scenario");
  add_common(protein, protein_args, false);
  auto* oracle = app.add_subcommand("oracle-compare",
                                    "audit the solver against the dense tree and the sampler");
  add_common(oracle, oracle_args, true);
  auto* mc = app.add_subcommand("mc", "run the stochastic sampler");
  add_common(mc, mc_args, true);
  auto* custom = app.add_subcommand("custom", "run an arbitrary configured model");
  add_common(custom, custom_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (init->parsed()) {
      const std::string text =
          ultrarelax::config_to_json(ultrarelax::default_config_for(init_scenario));
      if (init_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream file(init_path, std::ios::binary);
        if (!file) throw ultrarelax::IoError("cannot open " + init_path + " for writing");
        file << text;
        if (!file) throw ultrarelax::IoError("write to " + init_path + " failed");
        std::cout << "wrote " << init_path << "\n";
      }
      return 0;
    }
    if (glass->parsed()) {
      const auto cfg = resolve_config(glass_args, "glass");
      const auto out = glass_args.out_dir.empty() ? default_out_dir() : glass_args.out_dir;
      return report(ultrarelax::run_glass_scenario(cfg, out));
    }
    if (protein->parsed()) {
      const auto cfg = resolve_config(protein_args, "protein");
      const auto out = protein_args.out_dir.empty() ? default_out_dir() : protein_args.out_dir;
      return report(ultrarelax::run_protein_scenario(cfg, out));
    }
    if (oracle->parsed()) {
      const auto cfg = resolve_config(oracle_args, "custom");
      const auto out = oracle_args.out_dir.empty() ? default_out_dir() : oracle_args.out_dir;
      return report(ultrarelax::run_oracle_compare(cfg, out));
    }
    if (mc->parsed()) {
      const auto cfg = resolve_config(mc_args, "custom");
      const auto out = mc_args.out_dir.empty() ? default_out_dir() : mc_args.out_dir;
      return report(ultrarelax::run_mc(cfg, out));
    }
    if (custom->parsed()) {
      const auto cfg = resolve_config(custom_args, "custom");
      const auto out = custom_args.out_dir.empty() ? default_out_dir() : custom_args.out_dir;
      return report(ultrarelax::run_custom(cfg, out));
    }
  } catch (const ultrarelax::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ultrarelax::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const ultrarelax::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
