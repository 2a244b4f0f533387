// Acceptance suite: runs every gate criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shubin/bernstein.hpp"
#include "shubin/control.hpp"
#include "shubin/operator_core.hpp"
#include "shubin/region.hpp"
#include "shubin/rng.hpp"
#include "shubin/spectral.hpp"

using namespace shubin;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Region named_region(const std::string& name, double window) {
  if (name == "omega0") return example_region_omega_zero(window);
  if (name == "omega13") return example_region_omega_delta(1.0 / 3.0, window);
  if (name == "half") return Region::half_line(window);
  if (name == "unit") return Region::line({{0.0, 1.0}}, window);
  throw std::invalid_argument("named_region: " + name);
}

std::vector<double> geom(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return out;
}

// ---- criteria ------------------------------------------------------------

bool harmonic_oracle(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  const EigenBasis basis = eigenbasis({1, 1, 1.0}, 128, 64);
  double worst = 0.0;
  for (Index n = 0; n <= 40; ++n)
    worst = std::max(worst, std::abs(basis.eigenvalues[n] - (2.0 * n + 1.0)));
  const double elapsed = seconds_since(t0);
  std::ostringstream ss;
  ss << "max |lambda_n - (2n+1)| = " << worst << ", " << elapsed << " s";
  detail = ss.str();
  return worst <= 1e-9 && elapsed < 5.0;
}

bool spectral_constant_exactness(std::string& detail) {
  struct Combo {
    int k, m;
    std::string region;
  };
  const std::vector<Combo> combos = {
      {1, 1, "half"}, {1, 1, "omega0"}, {2, 1, "unit"}, {2, 2, "omega13"}, {1, 2, "half"}};
  double worst = 0.0;
  for (const auto& combo : combos) {
    const EigenBasis basis = eigenbasis({combo.k, combo.m, 1.0}, 128, 32);
    // 3-mode subspace: lambda halfway to the fourth eigenvalue
    const double lambda =
        0.5 * (basis.eigenvalues[2] + basis.eigenvalues[3]);
    const SpectralSubspace sub = spectral_subspace(basis, lambda);
    if (sub.dim() != 3) {
      detail = "subspace sizing failed";
      return false;
    }
    const Region region = named_region(combo.region, basis.window_halfwidth());
    const GramOnRegion gram = gram_on_region(basis, sub, region);
    const double exact = spectral_constant(gram).value;
    const double sampled = oracle::extremal_ratio(gram.matrix);
    worst = std::max(worst, std::abs(exact - sampled) / exact);
  }
  std::ostringstream ss;
  ss << "worst relative gap vs optimization oracle = " << worst;
  detail = ss.str();
  return worst <= 1e-6;
}

bool exponent_upper_bound(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    int k, m;
    std::string region;
    double delta;
    std::vector<double> grid;
  };
  const std::vector<Case> cases = {
      {1, 1, "omega0", 0.0, geom(3, 500, 12)},
      {1, 1, "omega13", 1.0 / 3.0, geom(3, 300, 12)},
      {1, 1, "half", 1.0, geom(2, 20, 10)},
      {2, 1, "omega0", 0.0, geom(4, 300, 12)},
      {2, 1, "omega13", 1.0 / 3.0, geom(4, 300, 12)},
      {2, 1, "half", 1.0, geom(3, 40, 10)},
      {2, 2, "omega0", 0.0, geom(20, 2000, 14)},
      {2, 2, "omega13", 1.0 / 3.0, geom(30, 2000, 14)},
      {2, 2, "half", 1.0, geom(4, 280, 12)},
  };
  std::ostringstream ss;
  bool ok = true;
  for (const auto& c : cases) {
    const ShubinParams params{c.k, c.m, 1.0};
    SweepOptions options;
    options.basis_n = 256;
    const EigenBasis probe = eigenbasis(params, 256, 4);
    const Region region = named_region(c.region, probe.window_halfwidth());
    const ConstantSeries series = constant_sweep(params, region, c.grid, options);
    const double e_theory = 0.5 * (c.delta / c.k + 1.0 / c.m);
    const ExponentFit fit = fit_exponent(series, e_theory);
    const bool this_ok = fit.verdict == Verdict::PASS && series.monotone_ok;
    ok = ok && this_ok;
    ss << "(" << c.k << "," << c.m << "," << c.region << ": tail " << fit.tail_max << " vs 2x"
       << fit.median << (this_ok ? " ok) " : " FAIL) ");
  }
  const double elapsed = seconds_since(t0);
  ss << elapsed << " s";
  detail = ss.str();
  return ok && elapsed < 600.0;
}

bool log_factor_variant(std::string& detail) {
  const ShubinParams params{2, 2, 1.0};
  SweepOptions options;
  options.basis_n = 256;
  const EigenBasis probe = eigenbasis(params, 256, 4);
  const Region unit = named_region("unit", probe.window_halfwidth());
  const ConstantSeries series = constant_sweep(params, unit, geom(8, 170, 14), options);
  const ExponentFit fit = fit_exponent(series, 0.5, true);
  std::ostringstream ss;
  ss << "tail " << fit.tail_max << " vs 2 x median " << fit.median << ", points "
     << series.lambdas.size();
  detail = ss.str();
  return fit.verdict == Verdict::PASS && series.monotone_ok;
}

bool bernstein_suite(std::string& detail) {
  struct Case {
    int k, m;
    std::vector<double> grid;
  };
  const std::vector<Case> cases = {
      {1, 1, geom(3, 80, 8)}, {2, 1, geom(4, 170, 8)}, {2, 2, geom(5, 300, 8)}};
  std::ostringstream ss;
  bool ok = true;
  for (const auto& c : cases) {
    ShubinParams params{c.k, c.m, 1.0};
    params.s = params.critical_s();
    BernsteinCheckOptions options;
    options.basis_n = 256;
    const BernsteinFit fit = bernstein_check(params, c.grid, 8, 8, options);
    const bool stable = fit.verdict == Verdict::PASS;
    ok = ok && stable;
    ss << "(" << c.k << "," << c.m << ": C " << fit.c_fit << " stability " << fit.stability
       << (stable ? " ok) " : " FAIL) ");

    // matrix-polynomial versus quadrature on sampled entries
    const EigenBasis basis = eigenbasis(params, 192, 48);
    const SpectralSubspace sub = spectral_subspace(basis, c.grid[c.grid.size() / 2]);
    const WeightedNormEngine engine(basis, 3, 2);
    for (const auto& [p, beta] : {std::pair{1, 0}, {2, 1}, {3, 2}}) {
      const double exact = engine.value(sub, p, beta);
      const double window = basis.window_halfwidth();
      Mat m(sub.dim(), sub.dim());
      for (Index i = 0; i < sub.dim(); ++i) {
        const Vec di = derivative_coeffs(basis.eigenvectors.col(sub.indices[i]), beta);
        for (Index j = i; j < sub.dim(); ++j) {
          const Vec dj = derivative_coeffs(basis.eigenvectors.col(sub.indices[j]), beta);
          const double v = oracle::gauss_panels(
              [&](double x) {
                Vec g(1);
                g << x;
                return std::pow(1.0 + x * x, p) * evaluate_hermite(di, g)[0] *
                       evaluate_hermite(dj, g)[0];
              },
              -window, window, 48, 80);
          m(i, j) = m(j, i) = v;
        }
      }
      const Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
      const double quad = std::sqrt(es.eigenvalues()[sub.dim() - 1]);
      if (std::abs(exact - quad) / exact > 1e-8) {
        ss << "quadrature gap " << std::abs(exact - quad) / exact << " at (p=" << p
           << ",b=" << beta << ") ";
        ok = false;
      }
    }
  }
  detail = ss.str();
  return ok;
}

bool dissipation(std::string& detail) {
  const EigenBasis basis = eigenbasis({2, 1, 0.7}, 128, 64);
  Rng rng(314);
  std::vector<Vec> probes;
  for (int i = 0; i < 100; ++i) {
    Vec p(basis.count());
    for (Index j = 0; j < p.size(); ++j) p[j] = rng.normal();
    p.normalize();
    probes.push_back(p);
  }
  std::vector<double> cutoffs, times;
  for (int i = 0; i < 10; ++i) {
    cutoffs.push_back(basis.eigenvalues[2 + 6 * i]);
    times.push_back(0.01 + 0.12 * i);
  }
  const DissipationResult result = dissipation_check(basis, cutoffs, times, probes);
  std::ostringstream ss;
  ss << "worst slack " << result.worst_slack << " over 100 probes x 10 pairs";
  detail = ss.str();
  return result.verdict == Verdict::PASS;
}

bool null_control(std::string& detail) {
  const EigenBasis basis = eigenbasis({2, 2, 1.0}, 256, 128);
  const Region omega0 = example_region_omega_zero(basis.window_halfwidth());
  std::ostringstream ss;
  bool ok = true;
  Rng rng(2718);
  for (const double horizon : {0.1, 1.0}) {
    double worst_lr = 0.0, worst_hum = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      Vec f0(32);
      for (Index i = 0; i < 32; ++i) f0[i] = rng.normal();
      f0.normalize();
      ControlProblem problem;
      problem.horizon = horizon;
      problem.region = &omega0;
      problem.basis = &basis;
      problem.n_control = 32;
      problem.initial = f0;

      const ControlSchedule schedule = lr_synthesize(problem);
      const double lr_residual = simulate_schedule(problem, schedule).norm();
      worst_lr = std::max(worst_lr, lr_residual);
      if (!schedule.converged || lr_residual > 1e-6) ok = false;

      const HumSolution hum = hum_control(problem);
      worst_hum = std::max(worst_hum, hum.residual_truncated);
      if (hum.residual_truncated > 1e-8) ok = false;
    }
    ss << "T=" << horizon << ": worst LR residual " << worst_lr << ", worst HUM residual "
       << worst_hum << "; ";
  }
  detail = ss.str();
  return ok;
}

bool cost_blowup_shape(std::string& detail) {
  const EigenBasis basis = eigenbasis({1, 1, 2.0}, 192, 96);
  const Region half = Region::half_line(basis.window_halfwidth());
  const CostBlowupFit fit =
      cost_blowup_study(basis, half, geom(0.05, 2.0, 12), 14, 0.01, 0.9);
  std::ostringstream ss;
  ss << "R^2 = " << fit.r_squared << ", slope = " << fit.slope << ", power = " << fit.power;
  detail = ss.str();
  return fit.verdict == Verdict::PASS;
}

bool geometry_suite(std::string& detail) {
  std::ostringstream ss;
  bool ok = true;

  // weak-thickness monotonicity surrogate on the example sets
  struct LineCase {
    Region region;
    double delta, scale;
  };
  const std::vector<LineCase> line_cases = {
      {example_region_omega_zero(500.0), 0.0, 2.0},
      {example_region_omega_delta(1.0 / 3.0, 500.0), 1.0 / 3.0, 3.0},
  };
  for (const auto& c : line_cases) {
    std::vector<Point2> centers;
    for (double x = -120.0; x <= 120.0; x += c.scale / 4.0) centers.push_back({x, 0.0});
    const auto base = thickness_profile(c.region, {c.scale, c.delta}, centers);
    if (!(base.gamma_hat > 0.0)) ok = false;
    for (const double dprime : {c.delta + 0.5 * (1.0 - c.delta), 1.0}) {
      const auto lifted = thickness_profile(c.region, {6.0 * c.scale, dprime}, centers);
      if (lifted.centers_used < 1 || lifted.gamma_hat < base.gamma_hat / 6.0) {
        ok = false;
        ss << "surrogate failed at delta'=" << dprime << " ";
      }
    }
  }
  McSpec mc;
  mc.samples = 20000;
  mc.seed = 99;
  {
    const Region band = example_region_omega_planar(0.5, 1.0, 60.0);
    std::vector<Point2> centers;
    for (double x = -12.0; x <= 12.0; x += 1.5)
      for (double y = -12.0; y <= 12.0; y += 1.5) centers.push_back({x, y});
    const auto base = thickness_profile(band, {3.0, 0.5}, centers, mc);
    const auto lifted = thickness_profile(band, {18.0, 0.75}, centers, mc);
    if (!(base.gamma_hat > 0.0) || lifted.gamma_hat < base.gamma_hat / 6.0) {
      ok = false;
      ss << "planar surrogate failed ";
    }
  }

  // liminf characterization consistency for cones and half-lines
  {
    const Region cone = example_region_cone(M_PI / 6.0, 400.0);
    const auto series = liminf_density(cone, {20.0, 80.0, 350.0}, 1e-3, mc);
    std::vector<Point2> centers;
    for (double x = -8.0; x <= 8.0; x += 1.0)
      for (double y = -8.0; y <= 8.0; y += 1.0) centers.push_back({x, y});
    const auto prof = thickness_profile(cone, {2.0, 1.0}, centers, mc);
    const bool consistent = series.one_weak_thick_consistent && prof.gamma_hat > 0.0;
    if (!consistent) {
      ok = false;
      ss << "cone consistency failed ";
    }

    const Region half = Region::half_line(400.0);
    const auto hseries = liminf_density(half, {20.0, 80.0, 350.0});
    std::vector<Point2> hcenters;
    for (double x = -60.0; x <= 60.0; x += 0.5) hcenters.push_back({x, 0.0});
    const auto hprof = thickness_profile(half, {2.0, 1.0}, hcenters);
    if (!hseries.one_weak_thick_consistent || !(hprof.gamma_hat > 0.2)) {
      ok = false;
      ss << "half-line consistency failed ";
    }

    const Region unit = Region::line({{0.0, 1.0}}, 400.0);
    const auto useries = liminf_density(unit, {20.0, 80.0, 350.0});
    if (useries.one_weak_thick_consistent) {
      ok = false;
      ss << "bounded set flagged thick ";
    }
  }

  // vitali postconditions on 1000 random configurations
  Rng rng(55);
  int vitali_failures = 0;
  for (int config = 0; config < 1000; ++config) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 12);
    std::vector<Ball> balls(n);
    for (auto& b : balls) {
      b.center.x = rng.uniform(-10.0, 10.0);
      b.center.y = config % 2 ? rng.uniform(-10.0, 10.0) : 0.0;
      b.radius = rng.uniform(0.05, 3.0);
    }
    const auto kept = vitali_select(balls);
    for (size_t a = 0; a < kept.size() && !vitali_failures; ++a)
      for (size_t b = a + 1; b < kept.size(); ++b) {
        const auto& ba = balls[kept[a]];
        const auto& bb = balls[kept[b]];
        if (std::hypot(ba.center.x - bb.center.x, ba.center.y - bb.center.y) <
            ba.radius + bb.radius - 1e-12)
          ++vitali_failures;
      }
    for (int i = 0; i < n; ++i) {
      bool covered = false;
      for (const Index j : kept) {
        const double d = std::hypot(balls[i].center.x - balls[j].center.x,
                                    balls[i].center.y - balls[j].center.y);
        if (d + balls[i].radius <= 3.0 * balls[j].radius + 1e-9) covered = true;
      }
      if (!covered) ++vitali_failures;
    }
  }
  if (vitali_failures > 0) {
    ok = false;
    ss << vitali_failures << " vitali failures ";
  }
  ss << "zero failures across surrogate, characterization and covering checks";
  detail = ss.str();
  return ok;
}

bool duality(std::string& detail) {
  struct Case {
    int k, m;
    double s, horizon;
    std::string region;
    Index nc;
  };
  const std::vector<Case> cases = {
      {1, 1, 1.0, 0.5, "half", 8},  {2, 1, 0.8, 0.3, "omega0", 10},
      {2, 2, 1.0, 1.0, "omega0", 12}, {1, 1, 2.0, 0.2, "half", 10},
      {2, 2, 0.75, 0.7, "omega13", 10},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    const EigenBasis basis = eigenbasis({c.k, c.m, c.s}, 128, 64);
    const Region region = named_region(c.region, basis.window_halfwidth());
    ControlProblem problem;
    problem.horizon = c.horizon;
    problem.region = &region;
    problem.basis = &basis;
    problem.n_control = c.nc;
    problem.initial = Vec::Zero(1);
    const double c_obs = observability_constant(problem);

    const Mat gram = hum_gramian(problem);
    Vec d(c.nc);
    for (Index i = 0; i < c.nc; ++i)
      d[i] = std::exp(-c.horizon * std::pow(basis.eigenvalues[i], c.s));
    const auto solver = gram.ldlt();
    Rng rng(1000 + c.nc);
    Vec v(c.nc);
    for (Index i = 0; i < c.nc; ++i) v[i] = rng.normal();
    v.normalize();
    double worst_cost = 0.0;
    for (int it = 0; it < 800; ++it) {
      v = d.asDiagonal() * solver.solve(Vec(d.asDiagonal() * v));
      worst_cost = v.norm();
      v /= worst_cost;
    }
    worst = std::max(worst, std::abs(worst_cost - c_obs) / c_obs);
  }
  std::ostringstream ss;
  ss << "worst relative gap between C_obs and worst-case HUM cost = " << worst;
  detail = ss.str();
  return worst <= 1e-6;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<bool(std::string&)>>> criteria = {
      {"harmonic oracle (eigenvalues 2n+1 to 1e-9, under 5 s)", harmonic_oracle},
      {"spectral constant vs optimization oracle (1e-6, 5 combos)", spectral_constant_exactness},
      {"growth exponent upper bound (9 region/operator combos)", exponent_upper_bound},
      {"log-factor variant on [0,1] for k=m=2", log_factor_variant},
      {"weighted-norm suite: stable fit + quadrature agreement", bernstein_suite},
      {"dissipation inequality (100 probes x 10 pairs, 1e-12 slack)", dissipation},
      {"null-control at k=m=2, s=1 from omega_zero (LR 1e-6, HUM 1e-8)", null_control},
      {"cost blow-up power law (R^2 >= 0.9 on [0.05, 2])", cost_blowup_shape},
      {"geometry suite: monotonicity, characterization, covering", geometry_suite},
      {"observability/control duality (1e-6, 5 problems)", duality},
  };

  int failures = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool pass = false;
    try {
      pass = criteria[i].second(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%2zu/10] %s: %s\n        %s\n", i + 1, pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  std::printf("%d/10 criteria passed in %.1f s\n", 10 - failures, seconds_since(t0));
  return failures;
}
