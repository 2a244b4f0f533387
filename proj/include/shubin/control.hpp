#pragma once

// Fractional heat flow e^{-tH^s} in the eigenbasis, dissipation checks,
// observability constants, and null-control synthesis by HUM and by the
// dyadic active/passive schedule. All free dynamics are diagonal; coupling
// enters only through the region Gram matrix.

#include <vector>

#include "shubin/operator_core.hpp"
#include "shubin/region.hpp"
#include "shubin/spectral.hpp"
#include "shubin/types.hpp"

namespace shubin {

struct SemigroupState {
  Vec coeffs;  // eigen-coefficients of g(t)
  double time = 0.0;
};

// coefficient n decays by e^{-dt lambda_n^s}; exact
SemigroupState propagate(const EigenBasis& basis, const SemigroupState& state, double dt);

struct DissipationResult {
  Verdict verdict = Verdict::PASS;
  double worst_slack = 0.0;  // max of lhs - rhs over all tested tuples
};

// ||(1 - pi_lambda) e^{-tH^s} g|| <= e^{-t lambda^s} ||g|| for unit probes
DissipationResult dissipation_check(const EigenBasis& basis,
                                    const std::vector<double>& lambda_cutoffs,
                                    const std::vector<double>& t_grid,
                                    const std::vector<Vec>& probes, double slack_tol = 1e-12);

struct ControlProblem {
  double horizon = 1.0;            // T
  const Region* region = nullptr;  // omega
  const EigenBasis* basis = nullptr;
  Vec initial;                     // eigen-coefficients of f0 (basis length or shorter)
  Index n_control = 0;             // control synthesized in the first n_control modes
  QuadratureSpec quadrature;

  void validate() const;
};

// Lambda_{ij} = G_{ij} (1 - e^{-(l_i^s + l_j^s) T}) / (l_i^s + l_j^s):
// the controllability Gramian with the time integral in closed form.
Mat hum_gramian(const ControlProblem& problem);

// same time factors for a rectangular Gram block (rows react, cols act)
Mat duhamel_response(const Vec& row_rates, const Vec& col_rates, const Mat& gram_block, double t);

struct Phase {
  double t_begin = 0.0;
  double t_end = 0.0;
  bool active = false;
  double cutoff = 0.0;  // spectral cutoff lambda_j of an active phase
  Index n_modes = 0;
  Vec phi;              // HUM multiplier of an active phase
  double cost = 0.0;    // integral of |u|^2 over the phase (closed form)
};

struct ControlSchedule {
  std::vector<Phase> phases;
  double total_cost = 0.0;
  std::vector<double> residual_trace;  // full-basis residual after each phase
  bool converged = true;

  void validate(double horizon) const;  // phases partition [0, T], costs >= 0
};

struct HumSolution {
  Vec phi;
  double cost = 0.0;
  double condition = 1.0;
  double residual_truncated = 0.0;  // ||f(T)|| over the first n_control modes
  double residual_full = 0.0;       // over every basis mode
  ControlSchedule schedule;         // single active phase covering [0, T]
};

HumSolution hum_control(const ControlProblem& problem, double condition_limit = 1e12);

struct LrOptions {
  double base_cutoff = -1.0;   // lambda_0 of the dyadic family; <0 -> lambda_4
  double growth = 2.0;         // cutoff growth per phase
  double split = 0.5;          // active fraction of each phase
  double tolerance = 1e-6;     // relative full-basis residual target
  int j_max = 14;
};

// Dyadic phases: phase j has budget T 2^{-(j+1)}, steers the block
// lambda <= mu growth^j to zero over its active half, then decays freely.
// Ends with a passive phase to T once the residual target is met.
ControlSchedule lr_synthesize(const ControlProblem& problem, const LrOptions& options = {});

// exact closed-form state at t = T under the schedule's controls
Vec simulate_schedule(const ControlProblem& problem, const ControlSchedule& schedule);

// independent fine-step re-simulation (exponential Euler on sampled controls)
Vec resimulate_schedule(const ControlProblem& problem, const ControlSchedule& schedule,
                        Index steps_per_phase = 2048);

// control coefficient of mode j at time t (zero in passive phases)
double control_coefficient(const EigenBasis& basis, const ControlSchedule& schedule, double t,
                           Index mode);

// C_obs(T) = sup_g ||e^{-TH^s} g||^2 / int_0^T ||e^{-tH^s} g||^2_omega dt,
// as the top generalized eigenvalue of (e^{-2T lambda^s} diag, B).
double observability_constant(const ControlProblem& problem);

struct CostBlowupFit {
  std::vector<double> horizons;
  std::vector<double> constants;  // C_obs per horizon
  double power = 0.0;             // exponent a/(s-a) of 1/T
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  Verdict verdict = Verdict::INCONCLUSIVE;
};

// linear fit of log(constants) against horizons^{-power}; the verdict needs
// slope > 0, R^2 above the floor, and >= 1.5 decades of horizon span
CostBlowupFit fit_cost_blowup(const std::vector<double>& horizons,
                              const std::vector<double>& constants, double power,
                              double min_r_squared = 0.9);

// fit of log C_obs against T^{-a/(s-a)} with a = s*(params) + epsilon
CostBlowupFit cost_blowup_study(const EigenBasis& basis, const Region& region,
                                const std::vector<double>& t_grid, Index n_control,
                                double epsilon = 0.01, double min_r_squared = 0.9,
                                const QuadratureSpec& spec = {});

}  // namespace shubin
