#include "shubin/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "shubin/hermite.hpp"

namespace shubin {

SpectralSubspace spectral_subspace(const EigenBasis& basis, double lambda) {
  SpectralSubspace sub;
  sub.basis = &basis;
  sub.threshold = lambda;
  for (Index n = 0; n < basis.count(); ++n)
    if (basis.eigenvalues[n] <= lambda) sub.indices.push_back(n);
  return sub;
}

GramOnRegion gram_on_region(const EigenBasis& basis, const SpectralSubspace& subspace,
                            const Region& region, const QuadratureSpec& spec) {
  if (region.kind() != Region::Kind::line)
    throw std::invalid_argument("gram_on_region: line regions only");
  if (subspace.dim() == 0)
    throw std::invalid_argument("gram_on_region: empty subspace");

  const double window = basis.window_halfwidth();
  std::vector<Interval> clipped;
  bool clip_flag = false;
  for (const auto& iv : region.intervals()) {
    Interval c{std::max(iv.lo, -window), std::min(iv.hi, window)};
    if (c.hi > c.lo) clipped.push_back(c);
    if (iv.lo < -window || iv.hi > window) clip_flag = true;
  }
  double measure = 0.0;
  for (const auto& iv : clipped) measure += iv.length();
  if (!(measure > 0.0))
    throw singular_region_error(
        "gram_on_region: region ∩ window has measure zero; the restricted L2 form is "
        "no norm on the subspace (positive measure required)");

  // resolve the fastest oscillation of the retained modes
  const double lambda_top = basis.eigenvalues[subspace.indices.back()];
  const double freq = std::max(1.0, std::pow(lambda_top, 1.0 / (2.0 * basis.params.m)));
  QuadratureSpec local = spec;
  local.max_panel = panel_for_frequency(spec.order, freq, spec.max_panel);
  const PiecewiseRule rule = piecewise_rule(clipped, local);

  const Mat phi = hermite_values<double>(basis.truncation, rule.points);
  Mat sub_vectors(basis.truncation, subspace.dim());
  for (Index j = 0; j < subspace.dim(); ++j)
    sub_vectors.col(j) = basis.eigenvectors.col(subspace.indices[j]);
  const Mat psi = sub_vectors.transpose() * phi;  // modes x points
  Mat g = psi * rule.weights.asDiagonal() * psi.transpose();
  g = 0.5 * (g + g.transpose()).eval();

  GramOnRegion out;
  out.matrix = std::move(g);
  out.quadrature = local;
  out.subspace = subspace;
  out.clipped = clip_flag;
  return out;
}

SpectralConstant spectral_constant(const GramOnRegion& gram) {
  const Eigen::SelfAdjointEigenSolver<Mat> es(gram.matrix);
  const double lo = es.eigenvalues()[0];
  const double hi = es.eigenvalues()[gram.matrix.rows() - 1];
  const double floor_value =
      1e3 * std::numeric_limits<double>::epsilon() * static_cast<double>(gram.matrix.rows());
  if (lo <= floor_value)
    throw ill_conditioned_error("spectral_constant: smallest Gram eigenvalue " +
                                std::to_string(lo) + " is below the conditioning floor " +
                                std::to_string(floor_value));
  SpectralConstant out;
  out.lambda_min = lo;
  out.value = 1.0 / std::sqrt(lo);
  out.cond = hi / lo;
  out.extremal = es.eigenvectors().col(0);
  if (out.extremal[0] < 0) out.extremal = -out.extremal;
  return out;
}

ConstantSeries constant_sweep(const ShubinParams& params, const Region& region,
                              const std::vector<double>& lambda_grid,
                              const SweepOptions& options) {
  ConstantSeries series;
  series.params = params;
  series.region_id = region.to_json();
  const EigenBasis basis = eigenbasis(params, options.basis_n, options.basis_n / 2);
  for (const double lambda : lambda_grid) {
    const SpectralSubspace sub = spectral_subspace(basis, lambda);
    if (sub.dim() == 0) {
      series.diagnostics.push_back("lambda=" + std::to_string(lambda) + ": empty subspace");
      continue;
    }
    if (basis.eigenvalues[basis.count() - 1] < lambda)
      throw truncation_error("constant_sweep: lambda " + std::to_string(lambda) +
                             " exceeds the basis range " +
                             std::to_string(basis.eigenvalues[basis.count() - 1]));
    const GramOnRegion gram = gram_on_region(basis, sub, region, options.quadrature);
    SpectralConstant c;
    try {
      c = spectral_constant(gram);
    } catch (const ill_conditioned_error& e) {
      series.diagnostics.push_back("lambda=" + std::to_string(lambda) + ": " + e.what());
      break;
    }
    if (c.value > options.max_constant) {
      series.diagnostics.push_back("lambda=" + std::to_string(lambda) +
                                   ": constant beyond trustworthy conditioning, sweep stopped");
      break;
    }
    if (!series.constants.empty() && c.value < series.constants.back() * (1.0 - 1e-9)) {
      series.monotone_ok = false;
      series.diagnostics.push_back(
          "lambda=" + std::to_string(lambda) +
          ": non-monotone constant (nested subspaces force C to be non-decreasing; "
          "suspect quadrature or truncation)");
    }
    series.lambdas.push_back(lambda);
    series.constants.push_back(c.value);
    series.n_modes.push_back(sub.dim());
    series.conds.push_back(c.cond);
  }
  return series;
}

ExponentFit fit_exponent(const ConstantSeries& series, double e_theory, bool log_variant) {
  ExponentFit fit;
  fit.e_theory = e_theory;
  fit.log_variant = log_variant;

  std::vector<double> xs, ys;  // log lambda, log log C
  for (size_t i = 0; i < series.lambdas.size(); ++i) {
    if (series.constants[i] >= 2.0) {
      xs.push_back(std::log(series.lambdas[i]));
      ys.push_back(std::log(std::log(series.constants[i])));
    }
  }
  std::vector<double> q;  // normalized growth sequence over the full series
  for (size_t i = 0; i < series.lambdas.size(); ++i) {
    const double lambda = series.lambdas[i];
    double divisor = std::pow(lambda, e_theory);
    if (log_variant) divisor *= std::abs(std::log(lambda));
    if (divisor > 0.0 && series.constants[i] > 1.0)
      q.push_back(std::log(series.constants[i]) / divisor);
  }

  if (xs.size() < 8 || q.size() < 3) {
    fit.verdict = Verdict::INCONCLUSIVE;
    return fit;
  }

  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  fit.e_fit = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.e_fit * sx) / n;
  fit.k_fit = std::exp(intercept);
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + fit.e_fit * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);

  std::vector<double> sorted = q;
  std::sort(sorted.begin(), sorted.end());
  fit.median = sorted[sorted.size() / 2];
  const size_t tail_start = q.size() - std::max<size_t>(1, q.size() / 3);
  fit.tail_max = q[tail_start];
  for (size_t i = tail_start; i < q.size(); ++i) fit.tail_max = std::max(fit.tail_max, q[i]);
  fit.verdict = fit.tail_max <= 2.0 * fit.median ? Verdict::PASS : Verdict::FAIL;
  return fit;
}

}  // namespace shubin
