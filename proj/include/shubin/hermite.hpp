#pragma once

// Ladder calculus for the orthonormal Hermite functions
//   Phi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2},
// the dense banded matrices of x, x^2 and -d^2/dx^2 in that basis, and the
// stable pointwise evaluation recurrence with the Gaussian weight folded in.

#include <Eigen/Dense>
#include <cmath>

#include "shubin/types.hpp"

namespace shubin {

// x: X_{n,n+1} = X_{n+1,n} = sqrt((n+1)/2), zero elsewhere.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> hermite_position_matrix(Index n_pad) {
  if (n_pad < 2) throw sizing_error("hermite_position_matrix: need n_pad >= 2");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_pad, n_pad);
  for (Index n = 0; n + 1 < n_pad; ++n) {
    const Scalar v = std::sqrt(Scalar(n + 1) / Scalar(2));
    x(n, n + 1) = v;
    x(n + 1, n) = v;
  }
  return x;
}

// x^2: diagonal (2n+1)/2, entries +sqrt((n+1)(n+2))/2 at offsets +-2.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> position_square_matrix(Index n_pad) {
  if (n_pad < 2) throw sizing_error("position_square_matrix: need n_pad >= 2");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x2 =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_pad, n_pad);
  for (Index n = 0; n < n_pad; ++n) x2(n, n) = Scalar(2 * n + 1) / Scalar(2);
  for (Index n = 0; n + 2 < n_pad; ++n) {
    const Scalar v = std::sqrt(Scalar(n + 1) * Scalar(n + 2)) / Scalar(2);
    x2(n, n + 2) = v;
    x2(n + 2, n) = v;
  }
  return x2;
}

// -d^2/dx^2: same bands as x^2 with the off-band sign flipped.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> momentum_square_matrix(Index n_pad) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> p2 = position_square_matrix<Scalar>(n_pad);
  for (Index n = 0; n + 2 < n_pad; ++n) {
    p2(n, n + 2) = -p2(n, n + 2);
    p2(n + 2, n) = -p2(n + 2, n);
  }
  return p2;
}

// d/dx in coefficient space: (Dc)_j = sqrt((j+1)/2) c_{j+1} - sqrt(j/2) c_{j-1},
// matching d/dx Phi_n = sqrt(n/2) Phi_{n-1} - sqrt((n+1)/2) Phi_{n+1}.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> hermite_derivative_matrix(Index n_pad) {
  if (n_pad < 2) throw sizing_error("hermite_derivative_matrix: need n_pad >= 2");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_pad, n_pad);
  for (Index j = 1; j < n_pad; ++j) d(j - 1, j) = std::sqrt(Scalar(j) / Scalar(2));
  for (Index j = 0; j + 1 < n_pad; ++j) d(j + 1, j) = -std::sqrt(Scalar(j + 1) / Scalar(2));
  return d;
}

// Values Phi_n(x_j) for n < count, one row per n. Upward recurrence
//   h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}
// seeded with h_0 = pi^{-1/4} exp(-x^2/2); underflow far beyond the last
// turning point is benign (true values are far below double range there).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> hermite_values(
    Index count, const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& grid) {
  if (count < 1) throw sizing_error("hermite_values: need count >= 1");
  const Index q = grid.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vals(count, q);
  const Scalar c0 = std::pow(Scalar(M_PI), Scalar(-0.25));
  for (Index j = 0; j < q; ++j) vals(0, j) = c0 * std::exp(-grid[j] * grid[j] / 2);
  if (count > 1) vals.row(1) = std::sqrt(Scalar(2)) * grid.transpose().cwiseProduct(vals.row(0));
  for (Index n = 1; n + 1 < count; ++n) {
    const Scalar a = std::sqrt(Scalar(2) / Scalar(n + 1));
    const Scalar b = std::sqrt(Scalar(n) / Scalar(n + 1));
    vals.row(n + 1) = a * grid.transpose().cwiseProduct(vals.row(n)) - b * vals.row(n - 1);
  }
  return vals;
}

}  // namespace shubin
