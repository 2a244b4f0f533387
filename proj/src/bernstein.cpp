#include "shubin/bernstein.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "shubin/hermite.hpp"
#include "shubin/parallel.hpp"

namespace shubin {

namespace {

double lgfact(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// x in coefficient space: slot j feeds sqrt((j+1)/2) up and sqrt(j/2) down
Vec apply_position(const Vec& c) {
  const Index len = c.size();
  Vec out = Vec::Zero(len + 1);
  for (Index j = 0; j < len; ++j) {
    if (j > 0) out[j - 1] += std::sqrt(0.5 * static_cast<double>(j)) * c[j];
    out[j + 1] += std::sqrt(0.5 * static_cast<double>(j + 1)) * c[j];
  }
  return out;
}

double top_eigenvalue_prefix(const Mat& form, Index dim) {
  const Eigen::SelfAdjointEigenSolver<Mat> es(form.topLeftCorner(dim, dim),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues()[dim - 1];
}

void require_prefix(const SpectralSubspace& subspace) {
  for (Index i = 0; i < subspace.dim(); ++i)
    if (subspace.indices[i] != i)
      throw std::invalid_argument("weighted norms: subspace must be a lambda prefix");
}

std::vector<double> extend_grid(const std::vector<double>& grid, double factor) {
  const double lo = grid.front(), hi = grid.back();
  const double hi2 = hi * factor;
  const size_t n = std::max<size_t>(
      grid.size() + 2,
      static_cast<size_t>(std::lround(grid.size() * std::log(hi2 / lo) / std::log(hi / lo))));
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i)
    out[i] = lo * std::pow(hi2 / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

}  // namespace

WeightedNormEngine::WeightedNormEngine(const EigenBasis& basis, int p_max, int beta_max)
    : basis_(&basis), p_max_(p_max), beta_max_(beta_max) {
  if (p_max < 0 || beta_max < 0)
    throw sizing_error("WeightedNormEngine: p_max and beta_max must be >= 0");
  const Index n = basis.truncation;
  const Index ext = n + beta_max + 2 * p_max + 4;
  const Index big = ext + 2 * p_max + 2;

  // derivative blocks, ext x count
  std::vector<Mat> b(beta_max + 1);
  b[0] = Mat::Zero(ext, basis.count());
  b[0].topRows(n) = basis.eigenvectors;
  if (beta_max > 0) {
    const Mat d = hermite_derivative_matrix<double>(ext);
    for (int beta = 1; beta <= beta_max; ++beta) b[beta] = d * b[beta - 1];
  }

  // weight polynomials (1 + x^2)^p, exact on the ext block when formed at big
  std::vector<Mat> w(p_max + 1);
  {
    Mat iw = Mat::Identity(big, big) + position_square_matrix<double>(big);
    Mat acc = Mat::Identity(big, big);
    w[0] = Mat::Identity(ext, ext);
    for (int p = 1; p <= p_max; ++p) {
      acc = acc * iw;
      w[p] = acc.topLeftCorner(ext, ext);
    }
  }

  forms_.resize((p_max + 1) * (beta_max + 1));
  for (int p = 0; p <= p_max; ++p) {
    for (int beta = 0; beta <= beta_max; ++beta) {
      Mat m = p == 0 ? Mat(b[beta].transpose() * b[beta])
                     : Mat(b[beta].transpose() * (w[p] * b[beta]));
      forms_[p * (beta_max + 1) + beta] = 0.5 * (m + m.transpose()).eval();
    }
  }
}

double WeightedNormEngine::value(const SpectralSubspace& subspace, int p, int beta) const {
  if (p < 0 || p > p_max_ || beta < 0 || beta > beta_max_)
    throw sizing_error("WeightedNormEngine::value: (p, beta) outside the configured padding");
  if (subspace.dim() == 0) throw std::invalid_argument("weighted_sup_norm: empty subspace");
  require_prefix(subspace);
  return std::sqrt(top_eigenvalue_prefix(form(p, beta), subspace.dim()));
}

double weighted_sup_norm(const EigenBasis& basis, const SpectralSubspace& subspace, int p,
                         int beta) {
  return WeightedNormEngine(basis, p, beta).value(subspace, p, beta);
}

BernsteinFit bernstein_check(const ShubinParams& params, const std::vector<double>& lambda_grid,
                             int p_max, int beta_max, const BernsteinCheckOptions& options,
                             WeightedNormTable* table_out) {
  params.validate();
  const double s = params.s;
  if (s > params.critical_s() + 1e-12)
    throw std::domain_error("bernstein_check: requires s <= s* = " +
                            std::to_string(params.critical_s()));
  if (lambda_grid.size() < 3)
    throw std::invalid_argument("bernstein_check: need at least 3 lambda points");
  const double nu = 1.0 / (2.0 * s * params.k);
  const double mu = 1.0 / (2.0 * s * params.m);

  const EigenBasis basis = eigenbasis(params, options.basis_n, options.basis_n / 2);
  const std::vector<double> ext_grid = extend_grid(lambda_grid, 2.0);
  if (ext_grid.back() > basis.eigenvalues[basis.count() - 1])
    throw truncation_error("bernstein_check: doubled lambda range " +
                           std::to_string(ext_grid.back()) + " exceeds the basis range");

  const WeightedNormEngine engine(basis, p_max, beta_max);

  const auto normalized = [&](double lambda, int p, int beta) {
    const SpectralSubspace sub = spectral_subspace(basis, lambda);
    return std::log(engine.value(sub, p, beta)) - nu * lgfact(p) - mu * lgfact(beta);
  };

  // base table, one column per lambda
  const int cells = (p_max + 1) * (beta_max + 1);
  Mat base(cells, static_cast<Index>(lambda_grid.size()));
  Mat raw(cells, static_cast<Index>(lambda_grid.size()));
  parallel_for(static_cast<Index>(lambda_grid.size()), [&](Index li) {
    const SpectralSubspace sub = spectral_subspace(basis, lambda_grid[li]);
    for (int p = 0; p <= p_max; ++p)
      for (int beta = 0; beta <= beta_max; ++beta) {
        const double v = engine.value(sub, p, beta);
        raw(p * (beta_max + 1) + beta, li) = v;
        base(p * (beta_max + 1) + beta, li) = std::log(v) - nu * lgfact(p) - mu * lgfact(beta);
      }
  });
  if (table_out) {
    table_out->params = params;
    for (size_t li = 0; li < lambda_grid.size(); ++li)
      for (int p = 0; p <= p_max; ++p)
        for (int beta = 0; beta <= beta_max; ++beta)
          table_out->entries.push_back(
              {p, beta, lambda_grid[li], raw(p * (beta_max + 1) + beta, static_cast<Index>(li))});
  }

  // eta' = largest per-cell least-squares slope against lambda^s
  Vec xs(static_cast<Index>(lambda_grid.size()));
  for (size_t i = 0; i < lambda_grid.size(); ++i)
    xs[static_cast<Index>(i)] = std::pow(lambda_grid[i], s);
  const double xbar = xs.mean();
  const double sxx = (xs.array() - xbar).square().sum();
  double eta = 1e-8;
  for (Index c = 0; c < cells; ++c) {
    const double ybar = base.row(c).mean();
    const double sxy = ((xs.array() - xbar) * (base.row(c).transpose().array() - ybar)).sum();
    eta = std::max(eta, sxy / sxx);
  }

  BernsteinFit fit;
  fit.eta_prime = eta;

  double log_c = -1e300, min_q = 1e300;
  double slack_sum = 0.0;
  Index slack_n = 0;
  for (size_t li = 0; li < lambda_grid.size(); ++li) {
    for (int p = 0; p <= p_max; ++p)
      for (int beta = 0; beta <= beta_max; ++beta) {
        const double q = (base(p * (beta_max + 1) + beta, static_cast<Index>(li)) -
                          eta * xs[static_cast<Index>(li)]) /
                         (1.0 + p + beta);
        log_c = std::max(log_c, q);
        min_q = std::min(min_q, q);
        slack_sum += q;
        ++slack_n;
      }
  }
  fit.c_fit = std::exp(std::max(log_c, 0.0));  // C >= 1 by the (0,0) cell at small eta
  fit.slack_mean = std::max(log_c, 0.0) - slack_sum / static_cast<double>(slack_n);
  fit.slack_max = std::max(log_c, 0.0) - min_q;

  // extension with eta' held fixed
  Vec ext_max(static_cast<Index>(ext_grid.size()));
  parallel_for(static_cast<Index>(ext_grid.size()), [&](Index li) {
    const double lambda = ext_grid[li];
    double best = -1e300;
    for (int p = 0; p <= p_max; ++p)
      for (int beta = 0; beta <= beta_max; ++beta) {
        const double q =
            (normalized(lambda, p, beta) - eta * std::pow(lambda, s)) / (1.0 + p + beta);
        best = std::max(best, q);
      }
    ext_max[li] = best;
  });
  const double log_c_ext = ext_max.maxCoeff();
  fit.c_extended = std::exp(std::max(log_c_ext, 0.0));
  fit.stability = fit.c_extended / fit.c_fit;

  const bool self_consistent = log_c <= std::log(fit.c_fit) + 1e-12;
  const bool stable = std::abs(fit.stability - 1.0) <= options.stability_tolerance;
  fit.verdict = self_consistent && stable ? Verdict::PASS : Verdict::FAIL;
  return fit;
}

double exp_weight_norm(const EigenBasis& basis, const SpectralSubspace& subspace, double eta,
                       int beta, const QuadratureSpec& spec) {
  if (eta < 0.0) throw std::invalid_argument("exp_weight_norm: eta must be >= 0");
  if (subspace.dim() == 0) throw std::invalid_argument("exp_weight_norm: empty subspace");
  require_prefix(subspace);
  const double twosk = 2.0 * basis.params.s * basis.params.k;
  const double turning = std::sqrt(2.0 * static_cast<double>(basis.truncation) + 1.0);

  const auto value_on = [&](double half_width) {
    const double lambda_top = basis.eigenvalues[subspace.indices.back()];
    const double freq = std::max(1.0, std::pow(lambda_top, 1.0 / (2.0 * basis.params.m)));
    QuadratureSpec local = spec;
    local.max_panel = panel_for_frequency(spec.order, freq, spec.max_panel);
    const PiecewiseRule rule = piecewise_rule({{-half_width, half_width}}, local);
    const Index ext = basis.truncation + beta;
    Mat b = Mat::Zero(ext, subspace.dim());
    for (Index j = 0; j < subspace.dim(); ++j) {
      const Vec d = derivative_coeffs(basis.eigenvectors.col(subspace.indices[j]), beta);
      b.col(j) = d;
    }
    const Mat vals = hermite_values<double>(ext, rule.points);
    const Mat psi = b.transpose() * vals;  // modes x points
    Vec w(rule.points.size());
    for (Index q = 0; q < rule.points.size(); ++q) {
      const double x2 = rule.points[q] * rule.points[q];
      w[q] = rule.weights[q] * std::exp(2.0 * eta * std::pow(1.0 + x2, 0.5 * twosk));
    }
    Mat m = psi * w.asDiagonal() * psi.transpose();
    m = 0.5 * (m + m.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return std::sqrt(es.eigenvalues()[subspace.dim() - 1]);
  };

  const double inner = value_on(std::max(turning - 4.0, 4.0));
  const double outer = value_on(turning + 6.0);
  if (!std::isfinite(outer) || std::abs(outer - inner) > 1e-6 * std::abs(outer))
    throw instability_error(
        "exp_weight_norm: value moves under window extension; eta = " + std::to_string(eta) +
        " outruns the decay resolved by the basis");
  return outer;
}

SupNormCheck sup_norm_check(const ShubinParams& params, const std::vector<double>& lambda_grid,
                            int beta_max, const SupNormOptions& options) {
  params.validate();
  const double s = params.s;
  if (s > params.critical_s() + 1e-12)
    throw std::domain_error("sup_norm_check: requires s <= s*");
  const double mu = 1.0 / (2.0 * s * params.m);

  const EigenBasis basis = eigenbasis(params, options.basis_n, options.basis_n / 2);
  const std::vector<double> ext_grid = extend_grid(lambda_grid, 2.0);
  if (ext_grid.back() > basis.eigenvalues[basis.count() - 1])
    throw truncation_error("sup_norm_check: doubled lambda range exceeds the basis range");
  const double window = basis.window_halfwidth();
  const Index grid_n =
      static_cast<Index>(std::ceil(2.0 * window / options.grid_spacing)) + 1;

  SupNormCheck out;
  // per beta: mode values on the dense grid, evaluated in chunks; for each x
  // the sup over the unit ball is the l2 norm of the column of mode values
  const Index count = basis.count();
  const Index ext = basis.truncation + beta_max;
  std::vector<Mat> b(beta_max + 1);
  b[0] = Mat::Zero(ext, count);
  b[0].topRows(basis.truncation) = basis.eigenvectors;
  if (beta_max > 0) {
    const Mat d = hermite_derivative_matrix<double>(ext);
    for (int beta = 1; beta <= beta_max; ++beta) b[beta] = d * b[beta - 1];
  }

  std::vector<double> all_lambdas = lambda_grid;
  all_lambdas.insert(all_lambdas.end(), ext_grid.begin(), ext_grid.end());
  const size_t n_base = lambda_grid.size();

  const Index chunk = 8192;
  // column norms accumulated per lambda cutoff; cutoffs are mode prefixes
  std::vector<Index> dims;
  for (const double lambda : all_lambdas) dims.push_back(spectral_subspace(basis, lambda).dim());

  Mat best = Mat::Zero(beta_max + 1, static_cast<Index>(all_lambdas.size()));
  for (Index start = 0; start < grid_n; start += chunk) {
    const Index len = std::min(chunk, grid_n - start);
    Vec xs(len);
    for (Index i = 0; i < len; ++i)
      xs[i] = -window + options.grid_spacing * static_cast<double>(start + i);
    const Mat vals = hermite_values<double>(ext, xs);
    for (int beta = 0; beta <= beta_max; ++beta) {
      const Mat psi = b[beta].transpose() * vals;  // count x len
      for (size_t li = 0; li < dims.size(); ++li) {
        const auto blk = psi.topRows(dims[li]);
        for (Index i = 0; i < len; ++i) {
          const double norm2 = blk.col(i).squaredNorm();
          double& cur = best(beta, static_cast<Index>(li));
          cur = std::max(cur, norm2);
        }
      }
    }
  }

  // fit on the base grid (beta factor only), re-evaluate on the extension
  Vec xsl(static_cast<Index>(n_base));
  for (size_t i = 0; i < n_base; ++i) xsl[static_cast<Index>(i)] = std::pow(lambda_grid[i], s);
  const double xbar = xsl.mean();
  const double sxx = (xsl.array() - xbar).square().sum();
  Mat table(beta_max + 1, static_cast<Index>(all_lambdas.size()));
  for (int beta = 0; beta <= beta_max; ++beta)
    for (size_t li = 0; li < all_lambdas.size(); ++li) {
      const double v = std::sqrt(best(beta, static_cast<Index>(li)));
      if (li < n_base) out.entries.push_back({0, beta, all_lambdas[li], v});
      table(beta, static_cast<Index>(li)) = std::log(v) - mu * lgfact(beta);
    }
  double eta = 1e-8;
  for (int beta = 0; beta <= beta_max; ++beta) {
    const double ybar = table.row(beta).head(n_base).mean();
    const double sxy = ((xsl.array() - xbar) *
                        (table.row(beta).head(n_base).transpose().array() - ybar))
                           .sum();
    eta = std::max(eta, sxy / sxx);
  }
  double log_c = 0.0, log_c_ext = 0.0;
  for (int beta = 0; beta <= beta_max; ++beta)
    for (size_t li = 0; li < all_lambdas.size(); ++li) {
      const double q = (table(beta, static_cast<Index>(li)) -
                        eta * std::pow(all_lambdas[li], s)) /
                       (1.0 + beta);
      if (li < n_base)
        log_c = std::max(log_c, q);
      else
        log_c_ext = std::max(log_c_ext, q);
    }
  out.eta_prime = eta;
  out.c_fit = std::exp(log_c);
  const double stability = std::exp(log_c_ext) / out.c_fit;
  out.verdict = std::abs(stability - 1.0) <= 0.2 ? Verdict::PASS : Verdict::FAIL;
  return out;
}

SmoothingCheck smoothing_check(const ShubinParams& params, const std::vector<double>& t_grid,
                               int alpha_max, int beta_max,
                               const std::optional<Vec>& probe_eigen_coeffs,
                               const SmoothingOptions& options) {
  params.validate();
  if (t_grid.empty()) throw std::invalid_argument("smoothing_check: empty t grid");
  for (const double t : t_grid)
    if (!(t > 0.0) || t > 1.0)
      throw std::invalid_argument("smoothing_check: t grid must lie in (0, 1]");

  const EigenBasis basis = eigenbasis(params, options.basis_n, options.basis_n / 2);
  Vec probe;
  if (probe_eigen_coeffs) {
    probe = *probe_eigen_coeffs;
    if (probe.size() > basis.count())
      throw sizing_error("smoothing_check: probe has more coefficients than eigenmodes");
  } else {
    probe = Vec::Constant(std::min<Index>(options.probe_modes, basis.count()), 1.0);
    probe /= probe.norm();
  }

  const double s = params.s;
  const double s_star = params.critical_s();
  SmoothingCheck out;
  out.short_time_regime = s <= s_star + 1e-12;
  const double nu = out.short_time_regime
                        ? 1.0 / (2.0 * s * params.k)
                        : static_cast<double>(params.m) / (params.k + params.m);
  const double mu = out.short_time_regime
                        ? 1.0 / (2.0 * s * params.m)
                        : static_cast<double>(params.k) / (params.k + params.m);
  const double pow_a = out.short_time_regime
                           ? 1.0 / (2.0 * s * params.k)
                           : static_cast<double>(params.m) / (params.k + params.m);
  const double pow_b = out.short_time_regime
                           ? 1.0 / (2.0 * s * params.m)
                           : static_cast<double>(params.k) / (params.k + params.m);
  const double pow_d = s_star / s;  // d = 1

  std::vector<double> t_sorted = t_grid;
  std::sort(t_sorted.begin(), t_sorted.end(), std::greater<double>());

  std::vector<double> per_t_bound;
  for (const double t : t_sorted) {
    Vec decayed(probe.size());
    for (Index n = 0; n < probe.size(); ++n)
      decayed[n] = probe[n] * std::exp(-t * std::pow(basis.eigenvalues[n], s));
    const Vec hermite = basis.eigenvectors.leftCols(probe.size()) * decayed;
    double bound_t = 0.0;
    Vec dcoef = hermite;
    for (int beta = 0; beta <= beta_max; ++beta) {
      Vec xcoef = dcoef;
      for (int alpha = 0; alpha <= alpha_max; ++alpha) {
        const double norm = xcoef.norm();
        const double ratio = norm *
                             std::pow(t, pow_a * alpha + pow_b * beta + pow_d) /
                             std::exp(nu * lgfact(alpha) + mu * lgfact(beta));
        out.entries.push_back({alpha, beta, t, norm, ratio});
        bound_t = std::max(bound_t, std::pow(ratio, 1.0 / (1.0 + alpha + beta)));
        if (alpha < alpha_max) xcoef = apply_position(xcoef);
      }
      if (beta < beta_max) dcoef = derivative_coeffs(dcoef, 1);
    }
    per_t_bound.push_back(bound_t);
  }

  out.c_s = *std::max_element(per_t_bound.begin(), per_t_bound.end());
  // monotone tail: the bound must not keep growing as t shrinks
  std::vector<double> sorted_bounds = per_t_bound;
  std::sort(sorted_bounds.begin(), sorted_bounds.end());
  const double median = sorted_bounds[sorted_bounds.size() / 2];
  const size_t tail_start = per_t_bound.size() - std::max<size_t>(1, per_t_bound.size() / 3);
  double tail_max = 0.0;
  for (size_t i = tail_start; i < per_t_bound.size(); ++i)
    tail_max = std::max(tail_max, per_t_bound[i]);
  out.verdict = tail_max <= 2.0 * median ? Verdict::PASS : Verdict::FAIL;
  return out;
}

MonomialNormTable monomial_norm_table(const Vec& hermite_coeffs, int alpha_max, int beta_max) {
  MonomialNormTable table;
  Vec dcoef = hermite_coeffs;
  for (int beta = 0; beta <= beta_max; ++beta) {
    Vec xcoef = dcoef;
    for (int alpha = 0; alpha <= alpha_max; ++alpha) {
      table.entries.push_back({alpha, beta, 0.0, xcoef.norm()});
      if (alpha < alpha_max) xcoef = apply_position(xcoef);
    }
    if (beta < beta_max) dcoef = derivative_coeffs(dcoef, 1);
  }
  return table;
}

MonomialNormTable bracket_norm_table(const Vec& hermite_coeffs, int p_max, int beta_max) {
  MonomialNormTable table;
  const Index ext = hermite_coeffs.size() + beta_max + 2 * p_max + 2;
  const Index big = ext + 2 * p_max + 2;
  const Mat x2big = Mat::Identity(big, big) + position_square_matrix<double>(big);
  Vec dcoef = Vec::Zero(ext);
  dcoef.head(hermite_coeffs.size()) = hermite_coeffs;
  for (int beta = 0; beta <= beta_max; ++beta) {
    // ||<x>^p g||^2 = <g, (1+x^2)^p g>
    Vec gbig = Vec::Zero(big);
    gbig.head(ext) = dcoef;
    Vec acc = gbig;
    for (int p = 0; p <= p_max; ++p) {
      table.entries.push_back({p, beta, 0.0, std::sqrt(std::max(0.0, gbig.dot(acc)))});
      if (p < p_max) acc = x2big * acc;
    }
    if (beta < beta_max) {
      Vec next = derivative_coeffs(dcoef.head(hermite_coeffs.size() + beta), 1);
      dcoef = Vec::Zero(ext);
      dcoef.head(next.size()) = next;
    }
  }
  return table;
}

MonomialNormTable bracket_norm_table_fractional(const Vec& hermite_coeffs, double delta, int p_max,
                                                int beta_max, double window,
                                                const QuadratureSpec& spec) {
  MonomialNormTable table;
  const PiecewiseRule rule = piecewise_rule({{-window, window}}, spec);
  Vec dcoef = hermite_coeffs;
  for (int beta = 0; beta <= beta_max; ++beta) {
    const Vec vals = evaluate_hermite(dcoef, rule.points);
    for (int p = 0; p <= p_max; ++p) {
      double acc = 0.0;
      for (Index q = 0; q < rule.points.size(); ++q) {
        const double w = std::pow(1.0 + rule.points[q] * rule.points[q], delta * p);
        acc += rule.weights[q] * w * vals[q] * vals[q];
      }
      table.entries.push_back({p, beta, 0.0, std::sqrt(acc)});
    }
    if (beta < beta_max) dcoef = derivative_coeffs(dcoef, 1);
  }
  return table;
}

PremiseConstants fit_premise(const MonomialNormTable& table, double nu, double mu) {
  PremiseConstants c;
  double log_a = 0.0;
  for (const auto& e : table.entries) {
    if (e.p + e.beta == 0) continue;
    const double q =
        (std::log(e.value) - nu * lgfact(e.p) - mu * lgfact(e.beta)) / (e.p + e.beta);
    log_a = std::max(log_a, q);
  }
  c.a = std::exp(log_a);
  double cmax = 0.0;
  for (const auto& e : table.entries) {
    const double bound =
        std::exp(log_a * (e.p + e.beta) + nu * lgfact(e.p) + mu * lgfact(e.beta));
    cmax = std::max(cmax, e.value / bound);
  }
  c.c = std::max(cmax, 1e-300);
  return c;
}

namespace {

bool premise_holds(const MonomialNormTable& table, const PremiseConstants& c, double nu,
                   double mu) {
  for (const auto& e : table.entries) {
    const double bound = c.c * std::exp(std::log(c.a) * (e.p + e.beta) + nu * lgfact(e.p) +
                                        mu * lgfact(e.beta));
    if (e.value > bound * (1.0 + 1e-12)) return false;
  }
  return true;
}

}  // namespace

LemmaReport lemma_croch_check(const MonomialNormTable& premise,
                              const MonomialNormTable& conclusion, double nu, double mu,
                              std::optional<PremiseConstants> given) {
  LemmaReport report;
  report.constants = given ? *given : fit_premise(premise, nu, mu);
  report.premise_ok = premise_holds(premise, report.constants, nu, mu);
  if (!report.premise_ok) {
    report.verdict = Verdict::INCONCLUSIVE;
    return report;
  }
  const double d = 1.0;
  bool ok = true;
  for (const auto& e : conclusion.entries) {
    const double bound = report.constants.c *
                         std::pow(d + 1.0, 0.5 * e.p) *
                         std::exp(std::log(report.constants.a) * (e.p + e.beta) +
                                  nu * lgfact(e.p) + mu * lgfact(e.beta));
    report.worst_margin = std::max(report.worst_margin, e.value / bound);
    if (e.value > bound * (1.0 + 1e-12)) ok = false;
  }
  report.verdict = ok ? Verdict::PASS : Verdict::FAIL;
  return report;
}

LemmaReport lemma_interpolation_check(const MonomialNormTable& premise,
                                      const MonomialNormTable& conclusion, double delta, double nu,
                                      double mu, std::optional<PremiseConstants> given) {
  if (delta < 0.0 || delta > 1.0)
    throw std::domain_error("lemma_interpolation_check: requires 0 <= delta <= 1");
  LemmaReport report;
  report.constants = given ? *given : fit_premise(premise, nu, mu);
  report.premise_ok = premise_holds(premise, report.constants, nu, mu);
  if (!report.premise_ok) {
    report.verdict = Verdict::INCONCLUSIVE;
    return report;
  }
  const double amp = std::pow(8.0, nu) * std::exp(nu) * report.constants.a;
  bool ok = true;
  for (const auto& e : conclusion.entries) {
    const double bound = report.constants.c *
                         std::exp(std::log(amp) * (e.p + e.beta) + delta * nu * lgfact(e.p) +
                                  mu * lgfact(e.beta));
    report.worst_margin = std::max(report.worst_margin, e.value / bound);
    if (e.value > bound * (1.0 + 1e-12)) ok = false;
  }
  report.verdict = ok ? Verdict::PASS : Verdict::FAIL;
  return report;
}

GsProfile gs_coefficient_profile(const EigenBasis& basis, const Vec& eigen_coeffs, double t,
                                 const std::vector<double>& epsilon_grid, double saturation_tol) {
  if (t < 1.0) throw std::domain_error("gs_coefficient_profile: requires t >= 1");
  if (eigen_coeffs.size() > basis.count())
    throw sizing_error("gs_coefficient_profile: more coefficients than eigenmodes");
  const double q = (basis.params.k + basis.params.m) /
                   (2.0 * basis.params.k * basis.params.m * t);
  GsProfile profile;
  profile.t = t;
  profile.epsilons = epsilon_grid;
  const Index n = eigen_coeffs.size();
  for (const double eps : epsilon_grid) {
    // running log-sum-exp keeps e^{eps lambda^q} out of overflow
    double lse = -std::numeric_limits<double>::infinity();
    std::vector<double> partial(n);
    std::vector<double> log_partial(n);
    for (Index i = 0; i < n; ++i) {
      if (eigen_coeffs[i] != 0.0) {
        const double term =
            2.0 * std::log(std::abs(eigen_coeffs[i])) + eps * std::pow(basis.eigenvalues[i], q);
        const double hi = std::max(lse, term), lo = std::min(lse, term);
        lse = std::isinf(lo) ? hi : hi + std::log1p(std::exp(lo - hi));
      }
      log_partial[i] = lse;
      partial[i] = std::exp(lse);  // +inf past ~709 is the honest answer
    }
    const Index early = std::max<Index>(1, static_cast<Index>(std::floor(n / 1.2))) - 1;
    const bool saturated =
        std::isfinite(log_partial[n - 1]) &&
        log_partial[n - 1] - log_partial[early] < std::log1p(saturation_tol);
    profile.partial_sums.push_back(std::move(partial));
    profile.saturated.push_back(saturated);
  }
  return profile;
}

}  // namespace shubin
