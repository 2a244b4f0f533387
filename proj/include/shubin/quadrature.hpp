#pragma once

// Gauss-Legendre rules and their piecewise assembly over interval unions.

#include <vector>

#include "shubin/types.hpp"

namespace shubin {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

struct GaussLegendre {
  Vec nodes;    // on (-1, 1)
  Vec weights;  // sum to 2
};

// Nodes by Newton iteration on the Legendre three-term recurrence.
GaussLegendre gauss_legendre(int order);

struct QuadratureSpec {
  int order = 32;        // Gauss-Legendre points per panel
  double max_panel = 2.0;  // panels never exceed this length
};

struct PiecewiseRule {
  Vec points;
  Vec weights;
};

// One rule over a union of intervals, each split into panels of length at
// most max_panel so oscillatory integrands stay resolved.
PiecewiseRule piecewise_rule(const std::vector<Interval>& intervals, const QuadratureSpec& spec);

// Panel cap that keeps >= order/2 nodes per wavelength of a signal with
// local frequency bound freq (wavelength 2*pi/freq).
double panel_for_frequency(int order, double freq, double hard_cap = 2.0);

}  // namespace shubin
