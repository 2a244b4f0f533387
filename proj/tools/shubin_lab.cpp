// Command-line front door: validate configs, run experiments, list kinds.
// Exit codes: 0 ok, 1 FAIL verdicts, 2 usage/config error, 3 numerical error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "shubin/experiment.hpp"
#include "shubin/types.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shubin_lab: spectral constants, weighted-norm tables and null-control "
               "synthesis for 1-D anisotropic oscillators (-d2/dx2)^m + |x|^(2k)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  int threads = 0;

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_override, "output directory (overrides the config)");
  run->add_option("--seed", seed_override, "seed (overrides the config)")
      ->trigger_on_parse()
      ->each([&](const std::string&) { seed_given = true; });
  run->add_option("--threads", threads, "worker threads for independent grid points")
      ->envname("SHUBIN_LAB_THREADS");

  auto* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("config", config_path, "config file")->required();

  auto* list = app.add_subcommand("list-experiments", "list registered experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& [name, help] : shubin::experiment_kinds())
        std::cout << name << "  -  " << help << "\n";
      return 0;
    }

    std::vector<std::string> errors;
    shubin::ExperimentConfig config = shubin::parse_config_text(slurp(config_path), errors);
    const auto range_errors = shubin::validate_config(config);
    errors.insert(errors.end(), range_errors.begin(), range_errors.end());

    if (validate->parsed()) {
      if (errors.empty()) {
        std::cout << "ok\n";
        return 0;
      }
      for (const auto& e : errors) std::cerr << "error: " << e << "\n";
      return 2;
    }

    if (!errors.empty()) {
      for (const auto& e : errors) std::cerr << "error: " << e << "\n";
      return 2;
    }
    if (!out_override.empty()) config.out_dir = out_override;
    if (seed_given) config.seed = seed_override;
    if (threads > 0) config.threads = threads;

    const shubin::RunManifest manifest = shubin::run_experiment(config);
    for (const auto& [name, verdict] : manifest.verdicts)
      std::cout << name << ": " << shubin::to_string(verdict) << "\n";
    std::cout << "wall_seconds: " << manifest.wall_seconds << "\n";
    std::cout << "outputs: " << config.out_dir << "\n";
    return manifest.any_fail() ? 1 : 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
