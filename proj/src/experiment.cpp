#include "shubin/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>

#include "shubin/bernstein.hpp"
#include "shubin/control.hpp"
#include "shubin/io.hpp"
#include "shubin/operator_core.hpp"
#include "shubin/parallel.hpp"
#include "shubin/region.hpp"
#include "shubin/rng.hpp"
#include "shubin/spectral.hpp"

namespace shubin {

using nlohmann::json;

static constexpr const char* kVersion = "0.1.0";

std::vector<double> GridSpec::values() const {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    out[i] = geometric ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  return out;
}

const std::vector<std::pair<std::string, std::string>>& experiment_kinds() {
  static const std::vector<std::pair<std::string, std::string>> kinds = {
      {"spectrum", "eigenvalues of the operator and the basis reliability index"},
      {"constant_sweep", "restricted-Gram constants C_lambda(omega) over a lambda grid + growth fit"},
      {"thickness_gallery", "thickness profile and liminf density of a region"},
      {"bernstein", "weighted-norm table sup over E_lambda with fitted (C, eta') and stability"},
      {"smoothing", "semigroup smoothing ratio table over a t grid"},
      {"control", "HUM and dyadic active/passive null-control synthesis"},
      {"cost_blowup", "observability constant versus horizon with power-law fit"},
  };
  return kinds;
}

namespace {

struct KeyValue {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::optional<double> parse_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  try {
    size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

std::optional<long long> parse_int(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  try {
    size_t pos = 0;
    const long long v = std::stoll(t, &pos);
    if (pos != t.size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

std::optional<bool> parse_bool(const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  return std::nullopt;
}

// lo:hi:count[:lin|geom]
std::optional<GridSpec> parse_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() < 3 || parts.size() > 4) return std::nullopt;
  GridSpec g;
  const auto lo = parse_double(parts[0]), hi = parse_double(parts[1]);
  const auto count = parse_int(parts[2]);
  if (!lo || !hi || !count || *count < 1) return std::nullopt;
  g.lo = *lo;
  g.hi = *hi;
  g.count = static_cast<int>(*count);
  g.geometric = true;
  if (parts.size() == 4) {
    if (parts[3] == "lin")
      g.geometric = false;
    else if (parts[3] == "geom")
      g.geometric = true;
    else
      return std::nullopt;
  }
  return g;
}

// a:b, c:d, ...
std::optional<std::vector<Interval>> parse_intervals(const std::string& s) {
  std::vector<Interval> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    const size_t colon = t.find(':');
    if (colon == std::string::npos) return std::nullopt;
    const auto lo = parse_double(t.substr(0, colon));
    const auto hi = parse_double(t.substr(colon + 1));
    if (!lo || !hi || !(*hi > *lo)) return std::nullopt;
    out.push_back({*lo, *hi});
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, std::vector<std::string>& errors) {
  ExperimentConfig config;
  config.raw_text = text;

  std::vector<KeyValue> kvs;
  {
    std::stringstream ss(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      const size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']') {
          errors.push_back("line " + std::to_string(line_no) + ": malformed section header");
          continue;
        }
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const size_t eq = t.find('=');
      if (eq == std::string::npos) {
        errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
        continue;
      }
      kvs.push_back({section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), line_no});
    }
  }

  const auto bad = [&](const KeyValue& kv, const std::string& what) {
    errors.push_back("line " + std::to_string(kv.line) + ": " + kv.section + "." + kv.key + ": " +
                     what);
  };

  for (const auto& kv : kvs) {
    const std::string id = kv.section + "." + kv.key;
    const auto as_double = [&](double& slot) {
      if (const auto v = parse_double(kv.value))
        slot = *v;
      else
        bad(kv, "expected a number, got '" + kv.value + "'");
    };
    const auto as_int = [&](auto& slot) {
      if (const auto v = parse_int(kv.value))
        slot = static_cast<std::decay_t<decltype(slot)>>(*v);
      else
        bad(kv, "expected an integer, got '" + kv.value + "'");
    };
    const auto as_grid = [&](GridSpec& slot) {
      if (const auto v = parse_grid(kv.value))
        slot = *v;
      else
        bad(kv, "expected lo:hi:count[:lin|geom], got '" + kv.value + "'");
    };

    if (id == "experiment.kind") config.kind = kv.value;
    else if (id == "experiment.seed") as_int(config.seed);
    else if (id == "experiment.out") config.out_dir = kv.value;
    else if (id == "experiment.threads") as_int(config.threads);
    else if (id == "operator.k") as_int(config.params.k);
    else if (id == "operator.m") as_int(config.params.m);
    else if (id == "operator.s") as_double(config.params.s);
    else if (id == "operator.basis_n") as_int(config.basis_n);
    else if (id == "region.name") config.region_name = kv.value;
    else if (id == "region.delta") as_double(config.region_delta);
    else if (id == "region.scale") as_double(config.region_scale);
    else if (id == "region.theta") as_double(config.region_theta);
    else if (id == "region.from") as_double(config.region_from);
    else if (id == "region.window") as_double(config.region_window);
    else if (id == "region.intervals") {
      if (const auto v = parse_intervals(kv.value))
        config.region_intervals = *v;
      else
        bad(kv, "expected a:b, c:d, ... with b > a");
    } else if (id == "grids.lambda") as_grid(config.lambda_grid);
    else if (id == "grids.time") as_grid(config.time_grid);
    else if (id == "grids.t_smooth") as_grid(config.smooth_grid);
    else if (id == "grids.radius") as_grid(config.radius_grid);
    else if (id == "grids.p_max") as_int(config.p_max);
    else if (id == "grids.beta_max") as_int(config.beta_max);
    else if (id == "grids.alpha_max") as_int(config.alpha_max);
    else if (id == "density.delta") as_double(config.density_delta);
    else if (id == "density.scale") as_double(config.density_scale);
    else if (id == "control.horizon") as_double(config.horizon);
    else if (id == "control.n_control") as_int(config.n_control);
    else if (id == "control.base_cutoff") as_double(config.base_cutoff);
    else if (id == "control.growth") as_double(config.growth);
    else if (id == "control.split") as_double(config.split);
    else if (id == "control.tolerance") as_double(config.tolerance);
    else if (id == "control.j_max") as_int(config.j_max);
    else if (id == "control.epsilon") as_double(config.epsilon);
    else if (id == "fit.exponent") as_double(config.exponent);
    else if (id == "fit.delta") as_double(config.fit_delta);
    else if (id == "fit.log_variant") {
      if (const auto v = parse_bool(kv.value))
        config.log_variant = *v;
      else
        bad(kv, "expected true/false");
    } else {
      bad(kv, "unknown key");
    }
  }
  return config;
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  std::vector<std::string> errors;
  const auto known = experiment_kinds();
  if (c.kind.empty()) {
    errors.push_back("experiment.kind: required field is missing");
  } else if (std::none_of(known.begin(), known.end(),
                          [&](const auto& k) { return k.first == c.kind; })) {
    errors.push_back("experiment.kind: unknown kind '" + c.kind + "'");
  }
  if (c.params.k < 1) errors.push_back("operator.k: range violation (k >= 1)");
  if (c.params.m < 1) errors.push_back("operator.m: range violation (m >= 1)");
  if (!(c.params.s > 0.0)) errors.push_back("operator.s: range violation (s > 0)");
  if (c.basis_n < 8) errors.push_back("operator.basis_n: range violation (>= 8)");
  if (c.threads < 1) errors.push_back("experiment.threads: range violation (>= 1)");

  const std::set<std::string> region_names = {"omega_delta", "omega_zero", "omega_planar",
                                              "cone",        "half_line",  "whole_line",
                                              "intervals"};
  const bool needs_region = c.kind == "constant_sweep" || c.kind == "thickness_gallery" ||
                            c.kind == "control" || c.kind == "cost_blowup";
  if (needs_region) {
    if (c.region_name.empty())
      errors.push_back("region.name: required for kind '" + c.kind + "'");
    else if (!region_names.count(c.region_name))
      errors.push_back("region.name: unknown region '" + c.region_name + "'");
    if (c.region_name == "intervals" && c.region_intervals.empty())
      errors.push_back("region.intervals: required when region.name = intervals");
    if (c.region_name == "omega_delta" &&
        (c.region_delta < 0.0 || c.region_delta >= 1.0))
      errors.push_back("region.delta: range violation (omega_delta needs 0 <= delta < 1)");
    if (c.region_name == "omega_planar" &&
        (c.region_delta < 0.0 || c.region_delta > 1.0))
      errors.push_back("region.delta: range violation (0 <= delta <= 1)");
    if (c.region_name == "omega_planar" && !(c.region_scale > 0.0))
      errors.push_back("region.scale: range violation (> 0)");
    if (c.region_name == "cone" && (c.region_theta < 0.0 || c.region_theta >= 0.5 * M_PI))
      errors.push_back("region.theta: range violation (0 <= theta < pi/2)");
    const bool planar = c.region_name == "omega_planar" || c.region_name == "cone";
    if (planar && c.kind != "thickness_gallery")
      errors.push_back("region.name: kind '" + c.kind + "' needs a line region");
    if (planar && !(c.region_window > 0.0))
      errors.push_back("region.window: required for planar regions");
  }
  if (c.kind == "thickness_gallery") {
    if (c.density_delta < 0.0 || c.density_delta > 1.0)
      errors.push_back("density.delta: range violation (0 <= delta <= 1)");
    if (!(c.density_scale > 0.0)) errors.push_back("density.scale: range violation (> 0)");
  }
  for (const auto& [name, grid] :
       {std::pair<std::string, const GridSpec*>{"grids.lambda", &c.lambda_grid},
        {"grids.time", &c.time_grid},
        {"grids.t_smooth", &c.smooth_grid},
        {"grids.radius", &c.radius_grid}}) {
    if (grid->count < 1) errors.push_back(name + ": empty grid");
    if (!(grid->lo > 0.0) || grid->hi < grid->lo)
      errors.push_back(name + ": needs 0 < lo <= hi");
  }
  if (c.p_max < 0 || c.p_max > 16) errors.push_back("grids.p_max: range violation (0..16)");
  if (c.beta_max < 0 || c.beta_max > 16)
    errors.push_back("grids.beta_max: range violation (0..16)");
  if (c.alpha_max < 0 || c.alpha_max > 16)
    errors.push_back("grids.alpha_max: range violation (0..16)");
  if (c.kind == "control" || c.kind == "cost_blowup") {
    if (!(c.horizon > 0.0)) errors.push_back("control.horizon: range violation (> 0)");
    if (c.n_control < 1) errors.push_back("control.n_control: range violation (>= 1)");
    if (!(c.growth > 1.0)) errors.push_back("control.growth: range violation (> 1)");
    if (!(c.split > 0.0) || !(c.split < 1.0))
      errors.push_back("control.split: range violation ((0, 1))");
    if (!(c.tolerance > 0.0)) errors.push_back("control.tolerance: range violation (> 0)");
    if (c.j_max < 1) errors.push_back("control.j_max: range violation (>= 1)");
    if (!(c.epsilon > 0.0)) errors.push_back("control.epsilon: range violation (> 0)");
  }
  if (c.kind == "bernstein" || c.kind == "smoothing") {
    if (c.params.s > c.params.critical_s() + 1e-12 && c.kind == "bernstein")
      errors.push_back("operator.s: bernstein needs s <= s* = (1/k + 1/m)/2");
  }
  return errors;
}

namespace {

Region build_region(const ExperimentConfig& c, double default_window) {
  const double window = c.region_window > 0.0 ? c.region_window : default_window;
  if (c.region_name == "omega_delta")
    return example_region_omega_delta(c.region_delta, window);
  if (c.region_name == "omega_zero") return example_region_omega_zero(window);
  if (c.region_name == "omega_planar")
    return example_region_omega_planar(c.region_delta, c.region_scale, window);
  if (c.region_name == "cone") return example_region_cone(c.region_theta, window);
  if (c.region_name == "half_line") return Region::half_line(window, c.region_from);
  if (c.region_name == "whole_line") return Region::whole_line(window);
  if (c.region_name == "intervals") return Region::line(c.region_intervals, window);
  throw std::invalid_argument("build_region: unknown region " + c.region_name);
}

struct ArtifactSink {
  std::filesystem::path dir;
  std::map<std::string, std::string>* outputs;
  void write(const std::string& name, const std::string& body) const {
    write_file(dir / name, body);
    (*outputs)[name] = fnv1a_hex(body);
  }
};

void run_spectrum(const ExperimentConfig& c, const ArtifactSink& sink, RunManifest& manifest) {
  const EigenBasis basis = eigenbasis(c.params, c.basis_n, c.basis_n / 2);
  CsvWriter csv({"n", "lambda"});
  for (Index n = 0; n < basis.count(); ++n)
    csv.row_numbers({static_cast<double>(n), basis.eigenvalues[n]});
  sink.write("eigenvalues.csv", csv.body());
  manifest.verdicts["spectrum"] = Verdict::PASS;
}

void run_constant_sweep(const ExperimentConfig& c, const ArtifactSink& sink,
                        RunManifest& manifest) {
  SweepOptions options;
  options.basis_n = c.basis_n;
  const EigenBasis probe = eigenbasis(c.params, c.basis_n, 4);
  const Region region = build_region(c, probe.window_halfwidth());
  const ConstantSeries series =
      constant_sweep(c.params, region, c.lambda_grid.values(), options);

  CsvWriter csv({"lambda", "C", "log_C", "n_modes", "cond_G"});
  for (size_t i = 0; i < series.lambdas.size(); ++i)
    csv.row_numbers({series.lambdas[i], series.constants[i], std::log(series.constants[i]),
                     static_cast<double>(series.n_modes[i]), series.conds[i]});
  sink.write("constants.csv", csv.body());

  const double e_theory = c.exponent >= 0.0
                              ? c.exponent
                              : 0.5 * (c.fit_delta / c.params.k + 1.0 / c.params.m);
  const ExponentFit fit = fit_exponent(series, e_theory, c.log_variant);
  json jf;
  jf["e_fit"] = fit.e_fit;
  jf["k_fit"] = fit.k_fit;
  jf["residual"] = fit.residual;
  jf["e_theory"] = fit.e_theory;
  jf["log_variant"] = fit.log_variant;
  jf["tail_max"] = fit.tail_max;
  jf["median"] = fit.median;
  jf["verdict"] = to_string(fit.verdict);
  jf["region"] = json::parse(series.region_id);
  jf["diagnostics"] = series.diagnostics;
  sink.write("fit.json", jf.dump(2) + "\n");

  manifest.verdicts["monotone"] = series.monotone_ok ? Verdict::PASS : Verdict::FAIL;
  manifest.verdicts["exponent_bound"] = fit.verdict;
}

void run_thickness_gallery(const ExperimentConfig& c, const ArtifactSink& sink,
                           RunManifest& manifest) {
  const Region region = build_region(c, c.region_window > 0.0 ? c.region_window : 30.0);
  ThicknessDensity density{c.density_scale, c.density_delta};
  McSpec mc;
  mc.seed = c.seed;
  const auto centers = default_centers(region, density);
  const ThicknessReport report = thickness_profile(region, density, centers, mc);

  json jt;
  jt["gamma_hat"] = report.gamma_hat;
  jt["worst_center"] = {report.worst_center.x, report.worst_center.y};
  jt["worst_radius"] = report.worst_radius;
  jt["centers_used"] = report.centers_used;
  jt["centers_clipped"] = report.centers_clipped;
  jt["empty_region"] = report.empty_region;
  jt["density"] = {{"scale", density.scale}, {"delta", density.delta}};
  jt["region"] = json::parse(region.to_json());
  sink.write("thickness.json", jt.dump(2) + "\n");

  std::vector<double> radii = c.radius_grid.values();
  const double max_radius = region.window();
  radii.erase(std::remove_if(radii.begin(), radii.end(),
                             [&](double r) { return r > max_radius; }),
              radii.end());
  if (!radii.empty()) {
    const LiminfSeries liminf = liminf_density(region, radii, 1e-3, mc);
    CsvWriter csv({"R", "ratio", "std_error"});
    for (size_t i = 0; i < liminf.radii.size(); ++i)
      csv.row_numbers({liminf.radii[i], liminf.ratios[i], liminf.std_errors[i]});
    sink.write("liminf.csv", csv.body());
    manifest.verdicts["one_weak_thick_consistent"] =
        liminf.one_weak_thick_consistent ? Verdict::PASS : Verdict::INCONCLUSIVE;
  }
  manifest.verdicts["thickness"] =
      report.empty_region ? Verdict::FAIL
                          : (report.gamma_hat > 0.0 ? Verdict::PASS : Verdict::INCONCLUSIVE);
}

void run_bernstein(const ExperimentConfig& c, const ArtifactSink& sink, RunManifest& manifest) {
  BernsteinCheckOptions options;
  options.basis_n = c.basis_n;
  WeightedNormTable table;
  const BernsteinFit fit = bernstein_check(c.params, c.lambda_grid.values(), c.p_max,
                                           c.beta_max, options, &table);
  const double nu = 1.0 / (2.0 * c.params.s * c.params.k);
  const double mu = 1.0 / (2.0 * c.params.s * c.params.m);
  CsvWriter csv({"p", "beta", "lambda", "value", "bound", "ratio"});
  for (const auto& e : table.entries) {
    const double bound = std::pow(fit.c_fit, 1.0 + e.p + e.beta) *
                         std::exp(nu * std::lgamma(e.p + 1.0) + mu * std::lgamma(e.beta + 1.0) +
                                  fit.eta_prime * std::pow(e.lambda, c.params.s));
    csv.row_numbers({static_cast<double>(e.p), static_cast<double>(e.beta), e.lambda, e.value,
                     bound, e.value / bound});
  }
  sink.write("bernstein.csv", csv.body());

  json jf;
  jf["C"] = fit.c_fit;
  jf["eta_prime"] = fit.eta_prime;
  jf["C_extended"] = fit.c_extended;
  jf["stability"] = fit.stability;
  jf["slack_mean"] = fit.slack_mean;
  jf["slack_max"] = fit.slack_max;
  jf["verdict"] = to_string(fit.verdict);
  sink.write("fit.json", jf.dump(2) + "\n");
  manifest.verdicts["bernstein"] = fit.verdict;
}

void run_smoothing(const ExperimentConfig& c, const ArtifactSink& sink, RunManifest& manifest) {
  SmoothingOptions options;
  options.basis_n = c.basis_n;
  const SmoothingCheck check = smoothing_check(c.params, c.smooth_grid.values(), c.alpha_max,
                                               c.beta_max, std::nullopt, options);
  CsvWriter csv({"alpha", "beta", "t", "norm", "ratio"});
  for (const auto& e : check.entries)
    csv.row_numbers({static_cast<double>(e.alpha), static_cast<double>(e.beta), e.t, e.norm,
                     e.ratio});
  sink.write("smoothing.csv", csv.body());
  json jf;
  jf["C_s"] = check.c_s;
  jf["short_time_regime"] = check.short_time_regime;
  jf["verdict"] = to_string(check.verdict);
  sink.write("fit.json", jf.dump(2) + "\n");
  manifest.verdicts["smoothing"] = check.verdict;
}

void run_control(const ExperimentConfig& c, const ArtifactSink& sink, RunManifest& manifest) {
  const EigenBasis basis = eigenbasis(c.params, c.basis_n, c.basis_n / 2);
  const Region region = build_region(c, basis.window_halfwidth());

  ControlProblem problem;
  problem.horizon = c.horizon;
  problem.region = &region;
  problem.basis = &basis;
  problem.n_control = std::min<Index>(c.n_control, basis.count());
  Rng rng(c.seed);
  Vec f0(std::min<Index>(32, basis.count()));
  for (Index i = 0; i < f0.size(); ++i) f0[i] = rng.normal();
  f0 /= f0.norm();
  problem.initial = f0;

  LrOptions lr;
  lr.base_cutoff = c.base_cutoff;
  lr.growth = c.growth;
  lr.split = c.split;
  lr.tolerance = c.tolerance;
  lr.j_max = c.j_max;
  const ControlSchedule schedule = lr_synthesize(problem, lr);
  const HumSolution hum = hum_control(problem);

  json js;
  js["converged"] = schedule.converged;
  js["total_cost"] = schedule.total_cost;
  js["residual_trace"] = schedule.residual_trace;
  js["hum"] = {{"cost", hum.cost},
               {"condition", hum.condition},
               {"residual_truncated", hum.residual_truncated},
               {"residual_full", hum.residual_full}};
  json phases = json::array();
  for (const auto& ph : schedule.phases) {
    phases.push_back({{"t_begin", ph.t_begin},
                      {"t_end", ph.t_end},
                      {"active", ph.active},
                      {"cutoff", ph.cutoff},
                      {"n_modes", ph.n_modes},
                      {"cost", ph.cost}});
  }
  js["phases"] = phases;
  sink.write("schedule.json", js.dump(2) + "\n");

  CsvWriter csv({"t", "mode", "control_coefficient"});
  for (const auto& ph : schedule.phases) {
    if (!ph.active) continue;
    const Index samples = 512;
    for (Index i = 0; i < samples; ++i) {
      const double t =
          ph.t_begin + (ph.t_end - ph.t_begin) * static_cast<double>(i) / (samples - 1);
      for (Index mode = 0; mode < ph.n_modes; ++mode)
        csv.row_numbers({t, static_cast<double>(mode),
                         control_coefficient(basis, schedule, t, mode)});
    }
  }
  sink.write("trajectory.csv", csv.body());
  manifest.verdicts["lr_converged"] = schedule.converged ? Verdict::PASS : Verdict::FAIL;
  manifest.verdicts["hum_residual"] =
      hum.residual_truncated <= 1e-8 * f0.norm() ? Verdict::PASS : Verdict::FAIL;
}

void run_cost_blowup(const ExperimentConfig& c, const ArtifactSink& sink,
                     RunManifest& manifest) {
  const EigenBasis basis = eigenbasis(c.params, c.basis_n, c.basis_n / 2);
  const Region region = build_region(c, basis.window_halfwidth());
  const CostBlowupFit fit = cost_blowup_study(basis, region, c.time_grid.values(),
                                              std::min<Index>(c.n_control, basis.count()),
                                              c.epsilon);
  CsvWriter csv({"T", "C_obs", "x"});
  for (size_t i = 0; i < fit.horizons.size(); ++i)
    csv.row_numbers({fit.horizons[i], fit.constants[i],
                     std::pow(fit.horizons[i], -fit.power)});
  sink.write("cost.csv", csv.body());
  json jf;
  jf["power"] = fit.power;
  jf["slope"] = fit.slope;
  jf["intercept"] = fit.intercept;
  jf["r_squared"] = fit.r_squared;
  jf["verdict"] = to_string(fit.verdict);
  sink.write("fit.json", jf.dump(2) + "\n");
  manifest.verdicts["cost_blowup"] = fit.verdict;
}

}  // namespace

std::string RunManifest::to_json(const std::string& config_echo) const {
  json j;
  j["kind"] = kind;
  j["seed"] = seed;
  j["version"] = version;
  j["wall_seconds"] = wall_seconds;
  if (reliability >= 0) j["reliability_index"] = reliability;
  json jv;
  for (const auto& [name, verdict] : verdicts) jv[name] = to_string(verdict);
  j["verdicts"] = jv;
  json jo;
  for (const auto& [name, hash] : outputs) jo[name] = hash;
  j["outputs"] = jo;
  j["config"] = config_echo;
  return j.dump(2) + "\n";
}

RunManifest run_experiment(const ExperimentConfig& config) {
  const auto errors = validate_config(config);
  if (!errors.empty()) {
    std::string joined = "invalid config:";
    for (const auto& e : errors) joined += "\n  " + e;
    throw std::invalid_argument(joined);
  }

  RunManifest manifest;
  manifest.kind = config.kind;
  manifest.seed = config.seed;
  manifest.version = kVersion;
  set_max_threads(config.threads);

  const auto start = std::chrono::steady_clock::now();
  ArtifactSink sink{std::filesystem::path(config.out_dir), &manifest.outputs};
  std::filesystem::create_directories(sink.dir);

  const bool builds_basis = config.kind != "thickness_gallery";
  if (builds_basis) manifest.reliability = reliability_index(config.params, config.basis_n);

  if (config.kind == "spectrum") run_spectrum(config, sink, manifest);
  else if (config.kind == "constant_sweep") run_constant_sweep(config, sink, manifest);
  else if (config.kind == "thickness_gallery") run_thickness_gallery(config, sink, manifest);
  else if (config.kind == "bernstein") run_bernstein(config, sink, manifest);
  else if (config.kind == "smoothing") run_smoothing(config, sink, manifest);
  else if (config.kind == "control") run_control(config, sink, manifest);
  else if (config.kind == "cost_blowup") run_cost_blowup(config, sink, manifest);
  else throw std::invalid_argument("run_experiment: unknown kind " + config.kind);

  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(sink.dir / "manifest.json", manifest.to_json(config.raw_text));
  return manifest;
}

}  // namespace shubin
