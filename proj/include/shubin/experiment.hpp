#pragma once

// Config-driven front door: parses the line-oriented key=value format,
// validates exhaustively, runs one of the registered experiment kinds and
// writes CSV/JSON artifacts plus a manifest with content hashes.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shubin/quadrature.hpp"
#include "shubin/types.hpp"

namespace shubin {

struct GridSpec {
  double lo = 1.0;
  double hi = 10.0;
  int count = 8;
  bool geometric = true;
  std::vector<double> values() const;
};

struct ExperimentConfig {
  std::string kind;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int threads = 1;

  ShubinParams params;
  Index basis_n = 256;

  std::string region_name;  // empty when the kind needs no region
  double region_delta = 0.0;
  double region_scale = 1.0;
  double region_theta = 0.0;
  double region_from = 0.0;
  std::vector<Interval> region_intervals;
  double region_window = 0.0;  // 0 -> basis window

  GridSpec lambda_grid{4.0, 64.0, 12, true};
  GridSpec time_grid{0.05, 2.0, 12, true};
  GridSpec smooth_grid{1e-3, 1.0, 10, true};
  GridSpec radius_grid{1.0, 100.0, 12, true};
  int p_max = 8;
  int beta_max = 8;
  int alpha_max = 4;

  double density_delta = 0.0;
  double density_scale = 2.0;

  double horizon = 1.0;
  Index n_control = 16;
  double base_cutoff = 0.0;  // 0 -> lambda_4
  double growth = 2.0;
  double split = 0.5;
  double tolerance = 1e-6;
  int j_max = 14;
  double epsilon = 0.01;

  double exponent = -1.0;  // <0 -> 0.5 (fit_delta/k + 1/m)
  double fit_delta = 0.0;
  bool log_variant = false;

  std::string raw_text;  // exact config file contents, echoed in the manifest
};

const std::vector<std::pair<std::string, std::string>>& experiment_kinds();

// parse collects syntax/typing errors; validate_config collects range and
// consistency errors; neither short-circuits
ExperimentConfig parse_config_text(const std::string& text, std::vector<std::string>& errors);
std::vector<std::string> validate_config(const ExperimentConfig& config);

struct RunManifest {
  std::string kind;
  std::uint64_t seed = 0;
  std::string version;
  double wall_seconds = 0.0;
  Index reliability = -1;  // -1 when the kind builds no basis
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, std::string> outputs;  // file -> fnv1a hash
  std::string to_json(const std::string& config_echo) const;

  bool any_fail() const {
    for (const auto& [k, v] : verdicts)
      if (v == Verdict::FAIL) return true;
    return false;
  }
};

// runs the experiment, writes artifacts + manifest.json under config.out_dir
RunManifest run_experiment(const ExperimentConfig& config);

}  // namespace shubin
