#pragma once

// Hermite-Galerkin construction of H = (-d^2/dx^2)^m + |x|^(2k), its
// eigenpairs, and coefficient-space evaluation utilities. The eigenbasis is
// the central object of the repository: every downstream module consumes it
// read-only.

#include <vector>

#include "shubin/types.hpp"

namespace shubin {

inline Index padded_dimension(const ShubinParams& p, Index n) {
  return n + 2 * p.k + 2 * p.m + 4;
}

// Operator matrix, exact on the retained N x N block: the matrix powers are
// formed at the padded dimension and truncated afterwards, so no band of the
// product is lost.
Mat build_hamiltonian(const ShubinParams& params, Index n);

struct EigenBasis {
  ShubinParams params;
  Index truncation = 0;   // N, Galerkin dimension
  Index padded_dim = 0;   // dimension used when forming operator products
  Vec eigenvalues;        // ascending, strictly positive
  Mat eigenvectors;       // truncation x count, orthonormal columns
  bool sign_fixed = true; // first coefficient with |c| > 1e-12 made positive

  Index count() const { return eigenvalues.size(); }

  // Half-width of the interval on which any retained combination carries all
  // but ~1e-12 of its mass: every basis mode turns at sqrt(2n+1), plus margin.
  double window_halfwidth() const {
    return std::sqrt(2.0 * static_cast<double>(truncation) + 1.0) + 8.0;
  }
};

// Eigenpairs of the truncated operator. Only the lower half of the discrete
// spectrum may be requested; above it the Galerkin truncation pollutes the
// eigenvalues. Parity blocks are solved separately (the operator couples only
// indices of equal parity), which keeps eigenvectors exactly parity-pure.
EigenBasis eigenbasis(const ShubinParams& params, Index n, Index count);

// All modes with lambda_n <= lambda_max (same constraints as above).
EigenBasis eigenbasis_up_to(const ShubinParams& params, Index n, double lambda_max);

// Largest prefix length r such that lambda_0..lambda_{r-1} each move by less
// than 1e-8 relative when N grows by 25%. Two eigensolves; call on demand.
Index reliability_index(const ShubinParams& params, Index n);

enum class CoeffBasis { hermite, eigen };

// Coefficients of a function, either in the raw Hermite basis or in the
// eigenbasis of some EigenBasis.
struct CoeffVector {
  Vec coeffs;
  CoeffBasis basis = CoeffBasis::hermite;
};

// Hermite coefficients of an eigen-coefficient vector (pads with zero modes).
Vec to_hermite(const EigenBasis& basis, const Vec& eigen_coeffs);

// Pointwise values on a grid; eigen-tagged coefficients are converted first.
Vec evaluate(const EigenBasis& basis, const CoeffVector& f, const Vec& grid);
Vec evaluate_hermite(const Vec& hermite_coeffs, const Vec& grid);

// beta-fold derivative in Hermite coefficient space (exact ladder rule; the
// result has beta extra coefficients).
Vec derivative_coeffs(const Vec& hermite_coeffs, int beta);

}  // namespace shubin
