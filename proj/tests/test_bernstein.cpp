#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shubin/bernstein.hpp"
#include "shubin/operator_core.hpp"

using namespace shubin;

namespace {

// quadrature-side version of the weighted Gram for the same subspace
double weighted_sup_by_quadrature(const EigenBasis& basis, const SpectralSubspace& sub, int p,
                                  int beta) {
  const double window = basis.window_halfwidth();
  const Index dim = sub.dim();
  Mat m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const Vec di = derivative_coeffs(basis.eigenvectors.col(sub.indices[i]), beta);
    for (Index j = i; j < dim; ++j) {
      const Vec dj = derivative_coeffs(basis.eigenvectors.col(sub.indices[j]), beta);
      const double v = oracle::gauss_panels(
          [&](double x) {
            Vec g(1);
            g << x;
            return std::pow(1.0 + x * x, p) * evaluate_hermite(di, g)[0] *
                   evaluate_hermite(dj, g)[0];
          },
          -window, window, 48, 64);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return std::sqrt(es.eigenvalues()[dim - 1]);
}

}  // namespace

TEST_CASE("weighted sup norm: unit at (0,0), bracket weight on the ground state") {
  const EigenBasis basis = eigenbasis({1, 1, 1.0}, 64, 16);
  const SpectralSubspace one = spectral_subspace(basis, 1.0);
  REQUIRE(one.dim() == 1);
  CHECK(weighted_sup_norm(basis, one, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  // ||<x> Phi_0||^2 = 1 + <Phi_0, x^2 Phi_0> = 3/2
  CHECK(weighted_sup_norm(basis, one, 1, 0) ==
        doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));

  const SpectralSubspace big = spectral_subspace(basis, 9.0);
  CHECK(weighted_sup_norm(basis, big, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matrix-polynomial weights agree with quadrature") {
  const EigenBasis basis = eigenbasis({2, 1, 1.0}, 96, 24);
  const SpectralSubspace sub = spectral_subspace(basis, basis.eigenvalues[5]);
  REQUIRE(sub.dim() == 6);
  const double exact = weighted_sup_norm(basis, sub, 3, 2);
  const double quad = weighted_sup_by_quadrature(basis, sub, 3, 2);
  CHECK(std::abs(exact - quad) / exact < 1e-8);
}

TEST_CASE("weighted sup norm grows with p and with beta") {
  const EigenBasis basis = eigenbasis({2, 2, 0.5}, 96, 24);
  const SpectralSubspace sub = spectral_subspace(basis, basis.eigenvalues[7]);
  const WeightedNormEngine engine(basis, 4, 4);
  for (int p = 0; p < 4; ++p)
    for (int b = 0; b < 4; ++b) {
      CHECK(engine.value(sub, p + 1, b) >= engine.value(sub, p, b));
      CHECK(engine.value(sub, p, b + 1) >= engine.value(sub, p, b));
    }
}

TEST_CASE("factorial exponents of the weighted bound") {
  CHECK(bernstein_weight_exponent({1, 1, 1.0}) == doctest::Approx(0.5));
  CHECK(bernstein_derivative_exponent({1, 1, 1.0}) == doctest::Approx(0.5));
  CHECK(bernstein_weight_exponent({2, 1, 0.75}) == doctest::Approx(1.0 / 3.0));
  CHECK(bernstein_derivative_exponent({2, 1, 0.75}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("bernstein check fits stable constants at s = s*") {
  const ShubinParams params{1, 1, 1.0};
  BernsteinCheckOptions options;
  options.basis_n = 160;
  std::vector<double> grid;
  for (int i = 0; i < 8; ++i) grid.push_back(4.0 * std::pow(60.0 / 4.0, i / 7.0));
  WeightedNormTable table;
  const BernsteinFit fit = bernstein_check(params, grid, 6, 6, options, &table);
  CHECK(fit.verdict == Verdict::PASS);
  CHECK(fit.c_fit >= 1.0);
  CHECK(fit.eta_prime > 0.0);
  CHECK(std::abs(fit.stability - 1.0) <= 0.2);
  CHECK(table.entries.size() == 8 * 7 * 7);

  // r(0,0,lambda) = e^{-eta' lambda^s} stays below one
  for (const auto& e : table.entries)
    if (e.p == 0 && e.beta == 0) CHECK(e.value <= 1.0 + 1e-12);
}

TEST_CASE("bernstein check refuses s beyond the critical exponent") {
  CHECK_THROWS_AS(bernstein_check({2, 2, 0.9}, {4.0, 8.0, 16.0}, 2, 2), std::domain_error);
}

TEST_CASE("exponential weight norm: unit weight, ground-state value, runaway eta") {
  const EigenBasis basis = eigenbasis({1, 1, 1.0}, 64, 16);
  const SpectralSubspace one = spectral_subspace(basis, 1.0);
  CHECK(exp_weight_norm(basis, one, 0.0, 0) == doctest::Approx(1.0).epsilon(1e-10));

  // 2sk = 2 and eta = 1/8: ||e^{eta<x>^2} Phi_0||^2 = e^{1/4} * 2/sqrt(3)
  const double expect = std::exp(0.125) * std::pow(4.0 / 3.0, 0.25);
  const double got = exp_weight_norm(basis, one, 0.125, 0);
  CHECK(got == doctest::Approx(expect).epsilon(1e-9));
  const double by_quadrature = std::sqrt(oracle::gauss_panels(
      [&](double x) {
        return std::exp(0.25 * (1.0 + x * x)) * std::exp(-x * x) / std::sqrt(M_PI);
      },
      -basis.window_halfwidth(), basis.window_halfwidth(), 48, 64));
  CHECK(got == doctest::Approx(by_quadrature).epsilon(1e-9));

  CHECK_THROWS_AS(exp_weight_norm(basis, one, 0.6, 0), instability_error);
}

TEST_CASE("series expansion of the exponential weight matches term sums") {
  // sk = 1: sum_p (2 eta)^p ||<x>^p f||^2 / p! telescopes into the square of
  // the weighted norm
  const EigenBasis basis = eigenbasis({1, 1, 0.5}, 64, 16);
  const SpectralSubspace one = spectral_subspace(basis, 1.0);
  const double eta = 0.1;
  const double direct = exp_weight_norm(basis, one, eta, 0);

  Vec f = basis.eigenvectors.col(0);
  const MonomialNormTable brackets = bracket_norm_table(f, 24, 0);
  double series = 0.0, term_factor = 1.0;
  for (int p = 0; p <= 24; ++p) {
    const double norm = brackets.entries[p].value;
    series += term_factor * norm * norm;
    term_factor *= 2.0 * eta / (p + 1.0);
  }
  CHECK(std::abs(series - direct * direct) / series < 1e-6);
}

TEST_CASE("sup-norm check: ground-state peak and fitted bound") {
  const ShubinParams params{1, 1, 1.0};
  SupNormOptions options;
  options.basis_n = 64;
  options.grid_spacing = 1e-3;
  const SupNormCheck check = sup_norm_check(params, {1.0, 3.0, 5.0, 9.0, 13.0}, 1, options);
  CHECK(check.verdict == Verdict::PASS);
  // the lambda = 1 subspace is {Phi_0}; its best sup is the Gaussian peak
  for (const auto& e : check.entries) {
    if (e.beta == 0 && e.lambda == 1.0)
      CHECK(e.value == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-6));
  }
  CHECK(check.c_fit >= 1.0);

  // grid-refinement oracle on the peak value
  SupNormOptions fine = options;
  fine.grid_spacing = 5e-4;
  const SupNormCheck refined = sup_norm_check(params, {1.0, 3.0, 5.0, 9.0, 13.0}, 1, fine);
  for (size_t i = 0; i < check.entries.size(); ++i)
    CHECK(std::abs(check.entries[i].value - refined.entries[i].value) <
          1e-5 * refined.entries[i].value);
}

TEST_CASE("smoothing ratios: contraction row, exact decay, closed-form probe") {
  const ShubinParams params{1, 1, 1.0};
  SmoothingOptions options;
  options.basis_n = 96;

  // single-mode probe: every norm factorizes through e^{-t lambda_0^s}
  Vec probe = Vec::Zero(1);
  probe[0] = 1.0;
  const std::vector<double> ts{1.0, 0.3, 0.1, 0.03, 0.01};
  const SmoothingCheck check = smoothing_check(params, ts, 2, 2, probe, options);
  CHECK(check.verdict == Verdict::PASS);
  CHECK(check.short_time_regime);

  const EigenBasis basis = eigenbasis(params, 96, 48);
  const MonomialNormTable fixed = monomial_norm_table(basis.eigenvectors.col(0), 2, 2);
  for (const auto& e : check.entries) {
    const double decay = std::exp(-e.t * basis.eigenvalues[0]);
    if (e.alpha == 0 && e.beta == 0) {
      CHECK(std::abs(e.norm - decay) < 1e-12);
      CHECK(e.ratio <= e.t * (1.0 + 1e-12));  // contraction times t^{(s*/s) d}
    }
    for (const auto& f : fixed.entries) {
      if (f.p == e.alpha && f.beta == e.beta)
        CHECK(std::abs(e.norm - decay * f.value) < 1e-12 * std::max(1.0, f.value));
    }
    // k = m = s = 1 wiring: ratio = norm t^{alpha/2 + beta/2 + 1} / sqrt(a! b!)
    const double expect = e.norm *
                          std::pow(e.t, 0.5 * e.alpha + 0.5 * e.beta + 1.0) /
                          std::sqrt(std::tgamma(e.alpha + 1.0) * std::tgamma(e.beta + 1.0));
    CHECK(e.ratio == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("smoothing routes to the long-time exponents when s > s*") {
  const ShubinParams params{2, 2, 1.0};  // s* = 1/2 < s
  SmoothingOptions options;
  options.basis_n = 96;
  const SmoothingCheck check =
      smoothing_check(params, {1.0, 0.5, 0.1, 0.05, 0.01}, 1, 1, std::nullopt, options);
  CHECK_FALSE(check.short_time_regime);
  CHECK(check.verdict == Verdict::PASS);
}

TEST_CASE("newton-formula lemma on the ground state") {
  const EigenBasis basis = eigenbasis({1, 1, 1.0}, 64, 16);
  const Vec f = basis.eigenvectors.col(0);
  const MonomialNormTable premise = monomial_norm_table(f, 8, 8);
  const MonomialNormTable conclusion = bracket_norm_table(f, 8, 8);
  const LemmaReport report = lemma_croch_check(premise, conclusion, 0.5, 0.5);
  CHECK(report.premise_ok);
  CHECK(report.verdict == Verdict::PASS);
  CHECK(report.constants.a >= 1.0);
  CHECK(report.worst_margin <= 1.0 + 1e-12);
}

TEST_CASE("interpolation lemma: delta = 1 only weakens, delta = 0 flattens") {
  const EigenBasis basis = eigenbasis({1, 1, 1.0}, 64, 16);
  const Vec f = basis.eigenvectors.col(0);
  const MonomialNormTable premise = bracket_norm_table(f, 8, 4);
  const double window = basis.window_halfwidth();

  const MonomialNormTable at_one = bracket_norm_table_fractional(f, 1.0, 8, 4, window);
  // the quadrature path must reproduce the exact bracket table at delta = 1
  for (size_t i = 0; i < premise.entries.size(); ++i)
    CHECK(std::abs(at_one.entries[i].value - premise.entries[i].value) <
          1e-8 * premise.entries[i].value);
  const LemmaReport one = lemma_interpolation_check(premise, at_one, 1.0, 0.5, 0.5);
  CHECK(one.premise_ok);
  CHECK(one.verdict == Verdict::PASS);

  const MonomialNormTable at_zero = bracket_norm_table_fractional(f, 0.0, 8, 4, window);
  const LemmaReport zero = lemma_interpolation_check(premise, at_zero, 0.0, 0.5, 0.5);
  CHECK(zero.verdict == Verdict::PASS);

  // an impossible premise constant is reported, not failed
  const LemmaReport forced =
      lemma_interpolation_check(premise, at_one, 1.0, 0.5, 0.5, PremiseConstants{1e-9, 1.0});
  CHECK_FALSE(forced.premise_ok);
  CHECK(forced.verdict == Verdict::INCONCLUSIVE);
}

TEST_CASE("eigen-coefficient profile: single mode, decaying and flat tails") {
  const EigenBasis basis = eigenbasis({1, 1, 1.0}, 128, 64);

  Vec single = Vec::Zero(1);
  single[0] = 1.0;
  const GsProfile one = gs_coefficient_profile(basis, single, 1.0, {0.1, 0.5});
  const double q = (1.0 + 1.0) / (2.0 * 1.0 * 1.0 * 1.0);
  CHECK(one.partial_sums[0].back() ==
        doctest::Approx(std::exp(0.1 * std::pow(basis.eigenvalues[0], q))).epsilon(1e-12));
  CHECK(one.saturated[0]);

  Vec decaying(64);
  for (Index n = 0; n < 64; ++n) decaying[n] = std::exp(-basis.eigenvalues[n]);
  const GsProfile good = gs_coefficient_profile(basis, decaying, 1.0, {0.05});
  CHECK(good.saturated[0]);

  Vec flat(64);
  for (Index n = 0; n < 64; ++n) flat[n] = 1.0 / (n + 1.0);
  const GsProfile bad = gs_coefficient_profile(basis, flat, 1.0, {0.5});
  CHECK_FALSE(bad.saturated[0]);

  CHECK_THROWS_AS(gs_coefficient_profile(basis, single, 0.5, {0.1}), std::domain_error);
}
