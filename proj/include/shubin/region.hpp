#pragma once

// Measurable control regions: finite interval unions on the line (exact
// arithmetic) and named planar families sampled by Monte Carlo. Thickness
// certification against densities rho(x) = R<x>^delta, liminf densities, and
// the greedy Vitali ball selection live here.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shubin/quadrature.hpp"
#include "shubin/types.hpp"

namespace shubin {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class PlanarFamily { band_complement, cone };  // |y| > R<x>^delta resp. C_theta

struct PlanarSpec {
  PlanarFamily family = PlanarFamily::cone;
  double delta = 0.0;  // band_complement growth exponent
  double scale = 1.0;  // band_complement R
  double theta = 0.0;  // cone half-opening complement, 0 <= theta < pi/2
  bool contains(const Point2& p) const;
};

struct McSpec {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
};

class Region {
 public:
  enum class Kind { line, planar };

  static Region line(std::vector<Interval> intervals, double window);
  static Region planar(PlanarSpec spec, double window);
  static Region whole_line(double window);
  static Region half_line(double window, double from = 0.0);

  Kind kind() const { return kind_; }
  double window() const { return window_; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  const PlanarSpec& planar_spec() const { return planar_; }

  // total measure of the stored (window-clipped) representation
  double measure() const;
  bool contains(double x) const;

  std::string to_json() const;
  static Region from_json(const std::string& text);

 private:
  Region() = default;
  Kind kind_ = Kind::line;
  std::vector<Interval> intervals_;  // sorted, pairwise disjoint
  PlanarSpec planar_;
  double window_ = 0.0;
};

// rho(x) = R (1+|x|^2)^(delta/2)
struct ThicknessDensity {
  double scale = 1.0;  // R > 0
  double delta = 0.0;  // 0 <= delta <= 1
  double operator()(double x) const { return scale * std::pow(1.0 + x * x, 0.5 * delta); }
  double operator()(const Point2& p) const {
    return scale * std::pow(1.0 + p.x * p.x + p.y * p.y, 0.5 * delta);
  }
  void validate() const;
};

struct BallMeasure {
  double value = 0.0;
  double std_error = 0.0;  // zero for exact line computations
  bool clipped = false;    // ball not contained in the clip window
};

struct ThicknessReport {
  double gamma_hat = 0.0;
  Point2 worst_center;
  double worst_radius = 0.0;
  Index centers_used = 0;
  Index centers_clipped = 0;
  bool empty_region = false;
  ThicknessDensity density;
};

// |region ∩ B(center, radius)|. Line regions are exact; planar regions are
// Monte Carlo with the given sampling spec.
BallMeasure ball_intersection_measure(const Region& region, const Point2& center, double radius,
                                      const McSpec& mc = {});

// gamma_hat = min over centers of |omega ∩ B(x, rho(x))| / |B(x, rho(x))|.
// Centers whose ball leaves the clip window are flagged and excluded from the
// minimum (the stored representation cannot see the mass outside the window).
ThicknessReport thickness_profile(const Region& region, const ThicknessDensity& density,
                                  const std::vector<Point2>& centers, const McSpec& mc = {});

// Equi-spaced centers covering [-window, window] with spacing <= rho_min/4.
std::vector<Point2> default_centers(const Region& region, const ThicknessDensity& density);

struct LiminfSeries {
  std::vector<double> radii;
  std::vector<double> ratios;  // |omega ∩ B(0,R)| / |B(0,R)|
  std::vector<double> std_errors;
  bool one_weak_thick_consistent = false;  // tail min above threshold
};

LiminfSeries liminf_density(const Region& region, const std::vector<double>& radii,
                            double tail_threshold = 1e-3, const McSpec& mc = {});

struct Ball {
  Point2 center;
  double radius = 0.0;
};

// Greedy selection in decreasing radius order (ties by input index): keep a
// ball iff it is disjoint from every ball kept so far. The selected balls are
// pairwise disjoint and every input ball lies in the 3x dilation of some
// selected ball.
std::vector<Index> vitali_select(const std::vector<Ball>& balls);

// The example sets: omega_delta (line), omega_zero (unit intervals at even
// integers), omega_planar (|y| > R<x>^delta) and cone (C_theta), clipped to
// [-window, window].
Region example_region_omega_delta(double delta, double window);
Region example_region_omega_zero(double window);
Region example_region_omega_planar(double delta, double scale, double window);
Region example_region_cone(double theta, double window);
Region example_region(const std::string& name, double delta, double scale, double theta,
                      double window);

}  // namespace shubin
