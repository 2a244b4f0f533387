#pragma once

// Independent oracles used by the test suites. Each one avoids the library
// path it is checking: eigenvalues come from finite differences on a box,
// integrals from composite Simpson or Gauss-Legendre applied to raw
// callables, extremal Rayleigh quotients from random search plus power
// refinement, and Gramian time integrals from quadrature in t.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <functional>
#include <vector>

#include "shubin/rng.hpp"
#include "shubin/types.hpp"

namespace oracle {

using shubin::Index;
using shubin::Mat;
using shubin::Vec;

// smallest eigenvalue of a sparse SPD matrix by inverse power iteration
inline double smallest_eigenvalue(const Eigen::SparseMatrix<double>& a, int iters = 300) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
  shubin::Rng rng(12345);
  Vec v(a.rows());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
  v.normalize();
  for (int it = 0; it < iters; ++it) {
    v = lu.solve(v);
    v.normalize();
  }
  return v.dot(a * v);
}

// ground energy of -u'' + |x|^{2k} u on [-L, L], second-order differences
inline double fd_ground_energy_m1(int k, double box, Index points) {
  const Index n = points - 2;
  const double h = 2.0 * box / static_cast<double>(points - 1);
  std::vector<Eigen::Triplet<double>> trip;
  for (Index i = 0; i < n; ++i) {
    const double x = -box + h * static_cast<double>(i + 1);
    trip.emplace_back(i, i, 2.0 / (h * h) + std::pow(std::abs(x), 2 * k));
    if (i + 1 < n) {
      trip.emplace_back(i, i + 1, -1.0 / (h * h));
      trip.emplace_back(i + 1, i, -1.0 / (h * h));
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return smallest_eigenvalue(a);
}

// same with Richardson extrapolation of the h^2 error
inline double fd_ground_energy_m1_rich(int k, double box, Index points) {
  const double coarse = fd_ground_energy_m1(k, box, (points + 1) / 2);
  const double fine = fd_ground_energy_m1(k, box, points);
  return fine + (fine - coarse) / 3.0;
}

// ground energy of u'''' + x^2 u with the 4th-order 7-point stencil
inline double fd_ground_energy_m2(double box, Index points) {
  const Index n = points - 2;
  const double h = 2.0 * box / static_cast<double>(points - 1);
  const double h4 = h * h * h * h;
  const double c[4] = {56.0 / (6.0 * h4), -39.0 / (6.0 * h4), 12.0 / (6.0 * h4),
                       -1.0 / (6.0 * h4)};
  std::vector<Eigen::Triplet<double>> trip;
  for (Index i = 0; i < n; ++i) {
    const double x = -box + h * static_cast<double>(i + 1);
    trip.emplace_back(i, i, c[0] + x * x);
    for (Index off = 1; off <= 3; ++off) {
      if (i + off < n) {
        trip.emplace_back(i, i + off, c[off]);
        trip.emplace_back(i + off, i, c[off]);
      }
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return smallest_eigenvalue(a, 400);
}

// composite Simpson on a uniform grid (points must be odd)
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      Index points) {
  const double h = (hi - lo) / static_cast<double>(points - 1);
  double acc = f(lo) + f(hi);
  for (Index i = 1; i + 1 < points; ++i) acc += f(lo + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Gauss-Legendre in panels applied to a raw callable
inline double gauss_panels(const std::function<double(double)>& f, double lo, double hi,
                           int order, int panels) {
  // Newton nodes, independent of the library implementation
  std::vector<double> xs(order), ws(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    xs[i] = -x;
    xs[order - 1 - i] = x;
    ws[i] = ws[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (order % 2 == 1) xs[order / 2] = 0.0;
  double acc = 0.0;
  for (int seg = 0; seg < panels; ++seg) {
    const double a = lo + (hi - lo) * seg / panels;
    const double b = lo + (hi - lo) * (seg + 1) / panels;
    for (int q = 0; q < order; ++q)
      acc += 0.5 * (b - a) * ws[q] * f(0.5 * (a + b) + 0.5 * (b - a) * xs[q]);
  }
  return acc;
}

// random search + power-iteration refinement for the smallest Rayleigh
// quotient of a symmetric G with G <= I; returns lambda_min(G)^{-1/2}
inline double extremal_ratio(const Mat& g, std::uint64_t seed = 99, int restarts = 8,
                             int search = 1000, int iters = 4000) {
  shubin::Rng rng(seed);
  const double mu = 1.0 + 1e-6;
  double best = 1e300;
  for (int r = 0; r < restarts; ++r) {
    Vec v(g.rows());
    double best_q = 1e300;
    Vec best_v = Vec::Zero(g.rows());
    for (int s = 0; s < search; ++s) {
      for (Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
      v.normalize();
      const double q = v.dot(g * v);
      if (q < best_q) {
        best_q = q;
        best_v = v;
      }
    }
    v = best_v;
    for (int it = 0; it < iters; ++it) {
      v = mu * v - g * v;
      v.normalize();
    }
    best = std::min(best, v.dot(g * v));
  }
  return 1.0 / std::sqrt(best);
}

}  // namespace oracle
