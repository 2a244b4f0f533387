#include "shubin/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "shubin/hermite.hpp"

namespace shubin {

namespace {

Mat matrix_power(const Mat& a, int p) {
  Mat acc = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < p; ++i) acc = acc * a;
  return acc;
}

void fix_signs(Mat& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    for (Index i = 0; i < vectors.rows(); ++i) {
      if (std::abs(vectors(i, j)) > 1e-12) {
        if (vectors(i, j) < 0) vectors.col(j) = -vectors.col(j);
        break;
      }
    }
  }
}

}  // namespace

Mat build_hamiltonian(const ShubinParams& params, Index n) {
  params.validate();
  if (n < 4 * (params.k + params.m))
    throw sizing_error("build_hamiltonian: N must be >= 4(k+m) for k=" +
                       std::to_string(params.k) + ", m=" + std::to_string(params.m));
  const Index n_pad = padded_dimension(params, n);
  Mat h = matrix_power(momentum_square_matrix<double>(n_pad), params.m) +
          matrix_power(position_square_matrix<double>(n_pad), params.k);
  Mat trunc = h.topLeftCorner(n, n);
  // symmetric bit-for-bit
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) trunc(j, i) = trunc(i, j);
  return trunc;
}

EigenBasis eigenbasis(const ShubinParams& params, Index n, Index count) {
  params.validate();
  if (count < 1) throw sizing_error("eigenbasis: need count >= 1");
  if (count > n / 2)
    throw truncation_error("eigenbasis: requested " + std::to_string(count) +
                           " modes exceeds N/2 = " + std::to_string(n / 2) +
                           "; the upper half of the discrete spectrum is truncation-polluted");
  const Mat h = build_hamiltonian(params, n);

  // Split by parity: H couples indices at offsets {0, +-2, ...}, so the even
  // and odd coefficient sectors are exactly decoupled.
  const Index n_even = (n + 1) / 2;
  const Index n_odd = n / 2;
  Mat h_even(n_even, n_even), h_odd(n_odd, n_odd);
  for (Index i = 0; i < n_even; ++i)
    for (Index j = 0; j < n_even; ++j) h_even(i, j) = h(2 * i, 2 * j);
  for (Index i = 0; i < n_odd; ++i)
    for (Index j = 0; j < n_odd; ++j) h_odd(i, j) = h(2 * i + 1, 2 * j + 1);

  Eigen::SelfAdjointEigenSolver<Mat> se(h_even);
  Eigen::SelfAdjointEigenSolver<Mat> so(h_odd);

  EigenBasis basis;
  basis.params = params;
  basis.truncation = n;
  basis.padded_dim = padded_dimension(params, n);
  basis.eigenvalues.resize(count);
  basis.eigenvectors = Mat::Zero(n, count);

  Index ie = 0, io = 0;
  for (Index out = 0; out < count; ++out) {
    const bool take_even =
        io >= n_odd || (ie < n_even && se.eigenvalues()[ie] <= so.eigenvalues()[io]);
    if (take_even) {
      basis.eigenvalues[out] = se.eigenvalues()[ie];
      for (Index i = 0; i < n_even; ++i) basis.eigenvectors(2 * i, out) = se.eigenvectors()(i, ie);
      ++ie;
    } else {
      basis.eigenvalues[out] = so.eigenvalues()[io];
      for (Index i = 0; i < n_odd; ++i) basis.eigenvectors(2 * i + 1, out) = so.eigenvectors()(i, io);
      ++io;
    }
  }
  fix_signs(basis.eigenvectors);
  return basis;
}

EigenBasis eigenbasis_up_to(const ShubinParams& params, Index n, double lambda_max) {
  EigenBasis all = eigenbasis(params, n, n / 2);
  Index count = 0;
  while (count < all.count() && all.eigenvalues[count] <= lambda_max) ++count;
  if (count == 0)
    throw truncation_error("eigenbasis_up_to: no eigenvalue below lambda_max");
  if (count == all.count())
    throw truncation_error(
        "eigenbasis_up_to: lambda_max reaches past the reliable lower half of the "
        "discrete spectrum; increase N");
  all.eigenvalues.conservativeResize(count);
  all.eigenvectors.conservativeResize(Eigen::NoChange, count);
  return all;
}

Index reliability_index(const ShubinParams& params, Index n) {
  const Index n_big = (5 * n + 3) / 4;
  const EigenBasis a = eigenbasis(params, n, n / 2);
  const EigenBasis b = eigenbasis(params, n_big, n / 2);
  Index r = 0;
  while (r < a.count() &&
         std::abs(b.eigenvalues[r] - a.eigenvalues[r]) < 1e-8 * a.eigenvalues[r])
    ++r;
  return r;
}

Vec to_hermite(const EigenBasis& basis, const Vec& eigen_coeffs) {
  if (eigen_coeffs.size() > basis.count())
    throw sizing_error("to_hermite: more coefficients than eigenmodes");
  return basis.eigenvectors.leftCols(eigen_coeffs.size()) * eigen_coeffs;
}

Vec evaluate_hermite(const Vec& hermite_coeffs, const Vec& grid) {
  if (hermite_coeffs.size() == 0) return Vec::Zero(grid.size());
  const Mat vals = hermite_values<double>(hermite_coeffs.size(), grid);
  return vals.transpose() * hermite_coeffs;
}

Vec evaluate(const EigenBasis& basis, const CoeffVector& f, const Vec& grid) {
  if (f.basis == CoeffBasis::eigen) return evaluate_hermite(to_hermite(basis, f.coeffs), grid);
  return evaluate_hermite(f.coeffs, grid);
}

Vec derivative_coeffs(const Vec& hermite_coeffs, int beta) {
  if (beta < 0) throw sizing_error("derivative_coeffs: beta must be >= 0");
  Vec c = hermite_coeffs;
  for (int b = 0; b < beta; ++b) {
    const Index len = c.size();
    Vec d = Vec::Zero(len + 1);
    for (Index j = 0; j < len; ++j) {
      // Phi_j contributes sqrt(j/2) to slot j-1 and -sqrt((j+1)/2) to slot j+1
      if (j > 0) d[j - 1] += std::sqrt(0.5 * static_cast<double>(j)) * c[j];
      d[j + 1] -= std::sqrt(0.5 * static_cast<double>(j + 1)) * c[j];
    }
    c.swap(d);
  }
  return c;
}

}  // namespace shubin
