#include "shubin/quadrature.hpp"

#include <cmath>

namespace shubin {

GaussLegendre gauss_legendre(int order) {
  if (order < 1) throw sizing_error("gauss_legendre: order must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n
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
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

double panel_for_frequency(int order, double freq, double hard_cap) {
  if (freq <= 0.0) return hard_cap;
  return std::min(hard_cap, static_cast<double>(order) / (2.0 * freq));
}

PiecewiseRule piecewise_rule(const std::vector<Interval>& intervals, const QuadratureSpec& spec) {
  const GaussLegendre gl = gauss_legendre(spec.order);
  Index total = 0;
  std::vector<int> panels(intervals.size());
  for (size_t i = 0; i < intervals.size(); ++i) {
    const double len = intervals[i].length();
    if (len <= 0.0) {
      panels[i] = 0;
      continue;
    }
    panels[i] = std::max(1, static_cast<int>(std::ceil(len / spec.max_panel)));
    total += panels[i] * spec.order;
  }
  PiecewiseRule rule;
  rule.points.resize(total);
  rule.weights.resize(total);
  Index at = 0;
  for (size_t i = 0; i < intervals.size(); ++i) {
    const double a = intervals[i].lo, b = intervals[i].hi;
    for (int seg = 0; seg < panels[i]; ++seg) {
      const double aa = a + (b - a) * seg / panels[i];
      const double bb = a + (b - a) * (seg + 1) / panels[i];
      const double mid = 0.5 * (aa + bb), hw = 0.5 * (bb - aa);
      for (int q = 0; q < spec.order; ++q, ++at) {
        rule.points[at] = mid + hw * gl.nodes[q];
        rule.weights[at] = hw * gl.weights[q];
      }
    }
  }
  return rule;
}

}  // namespace shubin
