#pragma once

// The localisation cost C_lambda(omega) = sup over f in E_lambda of
// ||f||_{L2(R)} / ||f||_{L2(omega)}, computed exactly as lambda_min(G)^{-1/2}
// for the restricted Gram matrix G_{ij} = int_omega psi_i psi_j, plus growth
// fitting against a prescribed exponent.

#include <string>
#include <vector>

#include "shubin/operator_core.hpp"
#include "shubin/quadrature.hpp"
#include "shubin/region.hpp"
#include "shubin/types.hpp"

namespace shubin {

struct SpectralSubspace {
  const EigenBasis* basis = nullptr;
  double threshold = 0.0;        // lambda
  std::vector<Index> indices;    // { n : lambda_n <= lambda }
  Index dim() const { return static_cast<Index>(indices.size()); }
};

SpectralSubspace spectral_subspace(const EigenBasis& basis, double lambda);

struct GramOnRegion {
  Mat matrix;
  QuadratureSpec quadrature;
  SpectralSubspace subspace;
  bool clipped = false;  // region extended past the basis window
};

// G restricted to region ∩ [-L, L] with L the basis window; per-interval
// Gauss-Legendre panels sized to the top resolved frequency lambda^{1/(2m)}.
GramOnRegion gram_on_region(const EigenBasis& basis, const SpectralSubspace& subspace,
                            const Region& region, const QuadratureSpec& spec = {});

struct SpectralConstant {
  double value = 1.0;       // C = lambda_min(G)^{-1/2}
  double lambda_min = 1.0;
  double cond = 1.0;        // lambda_max / lambda_min
  Vec extremal;             // unit-norm coefficients attaining the sup
};

SpectralConstant spectral_constant(const GramOnRegion& gram);

struct ConstantSeries {
  std::vector<double> lambdas;
  std::vector<double> constants;
  std::vector<Index> n_modes;
  std::vector<double> conds;
  ShubinParams params;
  std::string region_id;
  bool monotone_ok = true;
  std::vector<std::string> diagnostics;
};

struct SweepOptions {
  Index basis_n = 256;
  QuadratureSpec quadrature;
  // points past this conditioning are dropped with a diagnostic instead of
  // returning garbage eigenvalues
  double max_constant = 3e5;
};

ConstantSeries constant_sweep(const ShubinParams& params, const Region& region,
                              const std::vector<double>& lambda_grid,
                              const SweepOptions& options = {});

struct ExponentFit {
  double e_fit = 0.0;
  double k_fit = 0.0;
  double residual = 0.0;   // rms of the loglog regression
  double e_theory = 0.0;
  bool log_variant = false;
  Verdict verdict = Verdict::INCONCLUSIVE;
  double tail_max = 0.0;   // max of last third of log C / lambda^e (/|log l|)
  double median = 0.0;     // median of the whole normalized sequence
};

// Least squares of log log C against log lambda on points with C >= 2; the
// verdict checks boundedness of log C / lambda^{e_theory} (divided by
// |log lambda| in the log variant): max of last third <= 2 x median.
ExponentFit fit_exponent(const ConstantSeries& series, double e_theory, bool log_variant = false);

}  // namespace shubin
