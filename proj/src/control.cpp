#include "shubin/control.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "shubin/parallel.hpp"

namespace shubin {

namespace {

Vec decay_rates(const EigenBasis& basis, Index count) {
  Vec rates(count);
  for (Index n = 0; n < count; ++n) rates[n] = std::pow(basis.eigenvalues[n], basis.params.s);
  return rates;
}

// G for the leading n modes over region ∩ window
Mat leading_gram(const EigenBasis& basis, const Region& region, Index n,
                 const QuadratureSpec& spec) {
  SpectralSubspace sub;
  sub.basis = &basis;
  sub.threshold = basis.eigenvalues[n - 1];
  for (Index i = 0; i < n; ++i) sub.indices.push_back(i);
  return gram_on_region(basis, sub, region, spec).matrix;
}

}  // namespace

SemigroupState propagate(const EigenBasis& basis, const SemigroupState& state, double dt) {
  if (dt < 0.0) throw std::invalid_argument("propagate: dt must be >= 0");
  if (state.coeffs.size() > basis.count())
    throw sizing_error("propagate: state has more coefficients than eigenmodes");
  SemigroupState next;
  next.time = state.time + dt;
  next.coeffs.resize(state.coeffs.size());
  for (Index n = 0; n < state.coeffs.size(); ++n)
    next.coeffs[n] =
        state.coeffs[n] * std::exp(-dt * std::pow(basis.eigenvalues[n], basis.params.s));
  return next;
}

DissipationResult dissipation_check(const EigenBasis& basis,
                                    const std::vector<double>& lambda_cutoffs,
                                    const std::vector<double>& t_grid,
                                    const std::vector<Vec>& probes, double slack_tol) {
  DissipationResult out;
  const Vec rates = decay_rates(basis, basis.count());
  for (const Vec& g : probes) {
    if (g.size() > basis.count())
      throw sizing_error("dissipation_check: probe longer than the basis");
    const double gnorm = g.norm();
    for (const double lambda : lambda_cutoffs) {
      for (const double t : t_grid) {
        double tail2 = 0.0;
        for (Index n = 0; n < g.size(); ++n)
          if (basis.eigenvalues[n] > lambda)
            tail2 += g[n] * g[n] * std::exp(-2.0 * t * rates[n]);
        const double lhs = std::sqrt(tail2);
        const double rhs = std::exp(-t * std::pow(lambda, basis.params.s)) * gnorm;
        out.worst_slack = std::max(out.worst_slack, lhs - rhs);
      }
    }
  }
  out.verdict = out.worst_slack <= slack_tol ? Verdict::PASS : Verdict::FAIL;
  return out;
}

void ControlProblem::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("ControlProblem: horizon must be > 0");
  if (region == nullptr || basis == nullptr)
    throw std::invalid_argument("ControlProblem: region and basis are required");
  if (region->kind() == Region::Kind::line && !(region->measure() > 0.0))
    throw singular_region_error("ControlProblem: control region must have positive measure");
  if (n_control < 1 || n_control > basis->count())
    throw sizing_error("ControlProblem: n_control outside the basis range");
  if (initial.size() > basis->count())
    throw sizing_error("ControlProblem: initial data longer than the basis");
}

Mat duhamel_response(const Vec& row_rates, const Vec& col_rates, const Mat& gram_block,
                     double t) {
  Mat out(row_rates.size(), col_rates.size());
  for (Index i = 0; i < row_rates.size(); ++i)
    for (Index j = 0; j < col_rates.size(); ++j) {
      const double sum = row_rates[i] + col_rates[j];
      out(i, j) = gram_block(i, j) * (1.0 - std::exp(-sum * t)) / sum;
    }
  return out;
}

Mat hum_gramian(const ControlProblem& problem) {
  problem.validate();
  const EigenBasis& basis = *problem.basis;
  const Mat g = leading_gram(basis, *problem.region, problem.n_control, problem.quadrature);
  const Vec rates = decay_rates(basis, problem.n_control);
  Mat gram = duhamel_response(rates, rates, g, problem.horizon);
  gram = 0.5 * (gram + gram.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()[0] < -1e-10)
    throw ill_conditioned_error(
        "hum_gramian: Gramian indefinite beyond tolerance; suspect quadrature or truncation "
        "(min eigenvalue " + std::to_string(es.eigenvalues()[0]) + ")");
  return gram;
}

void ControlSchedule::validate(double horizon) const {
  if (phases.empty()) throw std::invalid_argument("ControlSchedule: no phases");
  double t = 0.0;
  for (const auto& ph : phases) {
    if (std::abs(ph.t_begin - t) > 1e-12 * std::max(1.0, horizon))
      throw std::invalid_argument("ControlSchedule: phases do not partition [0, T]");
    if (!(ph.t_end > ph.t_begin)) throw std::invalid_argument("ControlSchedule: empty phase");
    if (ph.cost < 0.0) throw std::invalid_argument("ControlSchedule: negative cost");
    if (!ph.active && ph.cost != 0.0)
      throw std::invalid_argument("ControlSchedule: passive phase with nonzero cost");
    t = ph.t_end;
  }
  if (std::abs(t - horizon) > 1e-12 * std::max(1.0, horizon))
    throw std::invalid_argument("ControlSchedule: phases do not reach T");
}

namespace {

// state after an active phase on [0, tau]: diagonal decay plus the Duhamel
// response of the mode-coefficient control u_j(t) = phi_j e^{-l_j^s (tau-t)}
Vec advance_active(const Vec& state, const Vec& rates, const Mat& gram_cols, const Vec& phi,
                   double tau, Index n_active) {
  Vec next(state.size());
  for (Index i = 0; i < state.size(); ++i) next[i] = state[i] * std::exp(-rates[i] * tau);
  const Mat k = duhamel_response(rates, rates.head(n_active), gram_cols, tau);
  next += k * phi;
  return next;
}

}  // namespace

HumSolution hum_control(const ControlProblem& problem, double condition_limit) {
  problem.validate();
  const EigenBasis& basis = *problem.basis;
  const Index nc = problem.n_control;
  const Index nb = basis.count();

  const Mat g_full = leading_gram(basis, *problem.region, nb, problem.quadrature);
  const Vec rates = decay_rates(basis, nb);
  Mat gram = duhamel_response(rates.head(nc), rates.head(nc), g_full.topLeftCorner(nc, nc),
                              problem.horizon);
  gram = 0.5 * (gram + gram.transpose()).eval();

  const Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  const double cond = es.eigenvalues()[nc - 1] / es.eigenvalues()[0];
  if (!(es.eigenvalues()[0] > 0.0) || cond > condition_limit)
    throw ill_conditioned_error(
        "hum_control: Gramian condition number " + std::to_string(cond) +
        " exceeds the limit; lower n_control or enlarge the region");

  Vec f0 = Vec::Zero(nb);
  f0.head(problem.initial.size()) = problem.initial;

  Vec free_final(nc);
  for (Index n = 0; n < nc; ++n)
    free_final[n] = f0[n] * std::exp(-rates[n] * problem.horizon);
  const Vec phi = es.eigenvectors() *
                  (es.eigenvectors().transpose() * (-free_final)).cwiseQuotient(
                      es.eigenvalues());

  HumSolution sol;
  sol.phi = phi;
  sol.condition = cond;
  sol.cost = phi.dot(gram * phi);

  const Vec final_state = advance_active(f0, rates, g_full.leftCols(nc), phi, problem.horizon, nc);
  sol.residual_truncated = final_state.head(nc).norm();
  sol.residual_full = final_state.norm();

  Phase phase;
  phase.t_begin = 0.0;
  phase.t_end = problem.horizon;
  phase.active = true;
  phase.cutoff = basis.eigenvalues[nc - 1];
  phase.n_modes = nc;
  phase.phi = phi;
  phase.cost = sol.cost;
  sol.schedule.phases.push_back(std::move(phase));
  sol.schedule.total_cost = sol.cost;
  sol.schedule.residual_trace = {f0.norm(), sol.residual_full};
  sol.schedule.converged = true;
  return sol;
}

ControlSchedule lr_synthesize(const ControlProblem& problem, const LrOptions& options) {
  problem.validate();
  const EigenBasis& basis = *problem.basis;
  const Index nb = basis.count();
  const double horizon = problem.horizon;

  const Mat g_full = leading_gram(basis, *problem.region, nb, problem.quadrature);
  const Vec rates = decay_rates(basis, nb);
  const double mu = options.base_cutoff > 0.0 ? options.base_cutoff : basis.eigenvalues[4];

  Vec f = Vec::Zero(nb);
  f.head(problem.initial.size()) = problem.initial;
  const double f0_norm = f.norm();
  const double target = options.tolerance * f0_norm;

  ControlSchedule schedule;
  schedule.residual_trace.push_back(f0_norm);

  double t = 0.0;
  bool reached = f0_norm <= target;
  for (int j = 0; !reached && j < options.j_max; ++j) {
    const double tau = horizon * std::pow(0.5, j + 1);
    const double t_active = options.split * tau;
    const double cutoff = mu * std::pow(options.growth, j);
    Index n_active = 0;
    while (n_active < nb && basis.eigenvalues[n_active] <= cutoff) ++n_active;
    n_active = std::max<Index>(n_active, 1);

    // steer the block lambda <= cutoff to zero over the active window
    Mat gram = duhamel_response(rates.head(n_active), rates.head(n_active),
                                g_full.topLeftCorner(n_active, n_active), t_active);
    gram = 0.5 * (gram + gram.transpose()).eval();
    Vec rhs(n_active);
    for (Index n = 0; n < n_active; ++n)
      rhs[n] = -f[n] * std::exp(-rates[n] * t_active);
    const Vec phi = gram.ldlt().solve(rhs);

    Phase active;
    active.t_begin = t;
    active.t_end = t + t_active;
    active.active = true;
    active.cutoff = cutoff;
    active.n_modes = n_active;
    active.phi = phi;
    active.cost = phi.dot(gram * phi);
    schedule.phases.push_back(active);
    schedule.total_cost += active.cost;

    f = advance_active(f, rates, g_full.leftCols(n_active), phi, t_active, n_active);

    Phase passive;
    passive.t_begin = t + t_active;
    passive.t_end = t + tau;
    passive.active = false;
    schedule.phases.push_back(passive);
    for (Index i = 0; i < nb; ++i) f[i] *= std::exp(-rates[i] * (tau - t_active));

    t += tau;
    schedule.residual_trace.push_back(f.norm());
    reached = f.norm() <= target;
  }

  if (reached && t < horizon) {
    Phase coast;
    coast.t_begin = t;
    coast.t_end = horizon;
    coast.active = false;
    schedule.phases.push_back(coast);
    for (Index i = 0; i < nb; ++i) f[i] *= std::exp(-rates[i] * (horizon - t));
    schedule.residual_trace.push_back(f.norm());
  }
  schedule.converged = reached;
  return schedule;
}

Vec simulate_schedule(const ControlProblem& problem, const ControlSchedule& schedule) {
  problem.validate();
  const EigenBasis& basis = *problem.basis;
  const Index nb = basis.count();
  const Mat g_full = leading_gram(basis, *problem.region, nb, problem.quadrature);
  const Vec rates = decay_rates(basis, nb);
  Vec f = Vec::Zero(nb);
  f.head(problem.initial.size()) = problem.initial;
  for (const auto& ph : schedule.phases) {
    const double tau = ph.t_end - ph.t_begin;
    if (ph.active) {
      f = advance_active(f, rates, g_full.leftCols(ph.n_modes), ph.phi, tau, ph.n_modes);
    } else {
      for (Index i = 0; i < nb; ++i) f[i] *= std::exp(-rates[i] * tau);
    }
  }
  return f;
}

Vec resimulate_schedule(const ControlProblem& problem, const ControlSchedule& schedule,
                        Index steps_per_phase) {
  problem.validate();
  const EigenBasis& basis = *problem.basis;
  const Index nb = basis.count();
  const Mat g_full = leading_gram(basis, *problem.region, nb, problem.quadrature);
  const Vec rates = decay_rates(basis, nb);
  Vec f = Vec::Zero(nb);
  f.head(problem.initial.size()) = problem.initial;
  for (const auto& ph : schedule.phases) {
    const double tau = ph.t_end - ph.t_begin;
    if (!ph.active) {
      for (Index i = 0; i < nb; ++i) f[i] *= std::exp(-rates[i] * tau);
      continue;
    }
    const double h = tau / static_cast<double>(steps_per_phase);
    const Mat input = g_full.leftCols(ph.n_modes);
    for (Index step = 0; step < steps_per_phase; ++step) {
      // exponential Euler with the control sampled at the midpoint
      const double tm = (static_cast<double>(step) + 0.5) * h;
      Vec u(ph.n_modes);
      for (Index jm = 0; jm < ph.n_modes; ++jm)
        u[jm] = ph.phi[jm] * std::exp(-rates[jm] * (tau - tm));
      const Vec forcing = input * u;
      for (Index i = 0; i < nb; ++i) {
        const double decay = std::exp(-rates[i] * h);
        f[i] = f[i] * decay + forcing[i] * (1.0 - decay) / rates[i];
      }
    }
  }
  return f;
}

double control_coefficient(const EigenBasis& basis, const ControlSchedule& schedule, double t,
                           Index mode) {
  for (const auto& ph : schedule.phases) {
    if (t < ph.t_begin || t > ph.t_end) continue;
    if (!ph.active || mode >= ph.n_modes) return 0.0;
    const double rate = std::pow(basis.eigenvalues[mode], basis.params.s);
    return ph.phi[mode] * std::exp(-rate * (ph.t_end - t));
  }
  return 0.0;
}

double observability_constant(const ControlProblem& problem) {
  problem.validate();
  const EigenBasis& basis = *problem.basis;
  const Index nc = problem.n_control;
  const Mat g = leading_gram(basis, *problem.region, nc, problem.quadrature);
  const Vec rates = decay_rates(basis, nc);
  Mat b = duhamel_response(rates, rates, g, problem.horizon);
  b = 0.5 * (b + b.transpose()).eval();
  Mat numerator = Mat::Zero(nc, nc);
  for (Index n = 0; n < nc; ++n)
    numerator(n, n) = std::exp(-2.0 * problem.horizon * rates[n]);
  const Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(numerator, b, Eigen::EigenvaluesOnly |
                                                                           Eigen::Ax_lBx);
  const double c_obs = es.eigenvalues()[nc - 1];
  if (!std::isfinite(c_obs) || c_obs <= 0.0)
    throw ill_conditioned_error("observability_constant: generalized eigensolve failed");
  return c_obs;
}

CostBlowupFit fit_cost_blowup(const std::vector<double>& horizons,
                              const std::vector<double>& constants, double power,
                              double min_r_squared) {
  if (horizons.size() < 4 || horizons.size() != constants.size())
    throw std::invalid_argument("fit_cost_blowup: need >= 4 matching points");
  CostBlowupFit fit;
  fit.power = power;
  fit.horizons = horizons;
  fit.constants = constants;
  std::vector<double> xs, ys;
  for (size_t i = 0; i < horizons.size(); ++i) {
    xs.push_back(std::pow(horizons[i], -power));
    ys.push_back(std::log(constants[i]));
  }
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (size_t i = 0; i < n; ++i) {
    ss_res += std::pow(ys[i] - fit.intercept - fit.slope * xs[i], 2);
    ss_tot += std::pow(ys[i] - ybar, 2);
  }
  fit.r_squared = 1.0 - ss_res / ss_tot;
  const double span = std::log10(horizons.back()) - std::log10(horizons.front());
  if (span < 1.5)
    fit.verdict = Verdict::INCONCLUSIVE;
  else
    fit.verdict =
        fit.slope > 0.0 && fit.r_squared >= min_r_squared ? Verdict::PASS : Verdict::FAIL;
  return fit;
}

CostBlowupFit cost_blowup_study(const EigenBasis& basis, const Region& region,
                                const std::vector<double>& t_grid, Index n_control,
                                double epsilon, double min_r_squared,
                                const QuadratureSpec& spec) {
  if (t_grid.size() < 4) throw std::invalid_argument("cost_blowup_study: need >= 4 horizons");
  const double s = basis.params.s;
  const double a = basis.params.critical_s() + epsilon;
  if (!(s > a))
    throw std::domain_error("cost_blowup_study: requires s > a = s* + epsilon");

  const Mat g = leading_gram(basis, region, n_control, spec);
  const Vec rates = decay_rates(basis, n_control);
  std::vector<double> constants(t_grid.size());
  parallel_for(static_cast<Index>(t_grid.size()), [&](Index i) {
    const double t = t_grid[i];
    Mat b = duhamel_response(rates, rates, g, t);
    b = 0.5 * (b + b.transpose()).eval();
    Mat numerator = Mat::Zero(n_control, n_control);
    for (Index n = 0; n < n_control; ++n) numerator(n, n) = std::exp(-2.0 * t * rates[n]);
    const Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(numerator, b,
                                                           Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    constants[i] = es.eigenvalues()[n_control - 1];
  });
  return fit_cost_blowup(t_grid, constants, a / (s - a), min_r_squared);
}

}  // namespace shubin
