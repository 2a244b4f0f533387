#include "shubin/region.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "shubin/rng.hpp"

namespace shubin {

using nlohmann::json;

bool PlanarSpec::contains(const Point2& p) const {
  switch (family) {
    case PlanarFamily::band_complement:
      return std::abs(p.y) > scale * std::pow(1.0 + p.x * p.x, 0.5 * delta);
    case PlanarFamily::cone: {
      const double r = std::hypot(p.x, p.y);
      if (r <= 0.0) return false;
      return std::abs(std::atan2(p.y, p.x)) <= 0.5 * M_PI - theta;
    }
  }
  return false;
}

void ThicknessDensity::validate() const {
  if (!(scale > 0.0)) throw std::invalid_argument("ThicknessDensity: R must be > 0");
  if (delta < 0.0 || delta > 1.0)
    throw std::domain_error("ThicknessDensity: delta must lie in [0, 1]");
}

namespace {

std::vector<Interval> normalize(std::vector<Interval> ivs, double window) {
  for (auto& iv : ivs) {
    iv.lo = std::max(iv.lo, -window);
    iv.hi = std::min(iv.hi, window);
  }
  ivs.erase(std::remove_if(ivs.begin(), ivs.end(),
                           [](const Interval& iv) { return !(iv.hi > iv.lo); }),
            ivs.end());
  std::sort(ivs.begin(), ivs.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& iv : ivs) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

double overlap(const Interval& iv, double lo, double hi) {
  return std::max(0.0, std::min(iv.hi, hi) - std::max(iv.lo, lo));
}

}  // namespace

Region Region::line(std::vector<Interval> intervals, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("Region: window must be > 0");
  Region r;
  r.kind_ = Kind::line;
  r.window_ = window;
  r.intervals_ = normalize(std::move(intervals), window);
  return r;
}

Region Region::planar(PlanarSpec spec, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("Region: window must be > 0");
  Region r;
  r.kind_ = Kind::planar;
  r.window_ = window;
  r.planar_ = spec;
  return r;
}

Region Region::whole_line(double window) {
  return line({{-window, window}}, window);
}

Region Region::half_line(double window, double from) {
  return line({{from, window}}, window);
}

double Region::measure() const {
  if (kind_ != Kind::line) throw std::invalid_argument("Region::measure: line regions only");
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

bool Region::contains(double x) const {
  if (kind_ != Kind::line) throw std::invalid_argument("Region::contains: line regions only");
  for (const auto& iv : intervals_)
    if (x >= iv.lo && x <= iv.hi) return true;
  return false;
}

std::string Region::to_json() const {
  json j;
  j["window"] = window_;
  if (kind_ == Kind::line) {
    j["type"] = "line";
    json ivs = json::array();
    for (const auto& iv : intervals_) ivs.push_back({iv.lo, iv.hi});
    j["intervals"] = ivs;
  } else {
    j["type"] = "planar";
    switch (planar_.family) {
      case PlanarFamily::band_complement:
        j["family"] = "omega_planar";
        j["delta"] = planar_.delta;
        j["scale"] = planar_.scale;
        break;
      case PlanarFamily::cone:
        j["family"] = "cone";
        j["theta"] = planar_.theta;
        break;
    }
  }
  return j.dump();
}

Region Region::from_json(const std::string& text) {
  const json j = json::parse(text);
  const double window = j.at("window").get<double>();
  const std::string type = j.at("type").get<std::string>();
  if (type == "line") {
    std::vector<Interval> ivs;
    for (const auto& pair : j.at("intervals"))
      ivs.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    return line(std::move(ivs), window);
  }
  if (type == "planar") {
    PlanarSpec spec;
    const std::string family = j.at("family").get<std::string>();
    if (family == "omega_planar") {
      spec.family = PlanarFamily::band_complement;
      spec.delta = j.at("delta").get<double>();
      spec.scale = j.at("scale").get<double>();
    } else if (family == "cone") {
      spec.family = PlanarFamily::cone;
      spec.theta = j.at("theta").get<double>();
    } else {
      throw std::invalid_argument("Region::from_json: unknown planar family " + family);
    }
    return planar(spec, window);
  }
  throw std::invalid_argument("Region::from_json: unknown type " + type);
}

BallMeasure ball_intersection_measure(const Region& region, const Point2& center, double radius,
                                      const McSpec& mc) {
  if (!(radius > 0.0))
    throw std::invalid_argument("ball_intersection_measure: radius must be > 0");
  BallMeasure out;
  if (region.kind() == Region::Kind::line) {
    const double lo = center.x - radius, hi = center.x + radius;
    out.clipped = lo < -region.window() || hi > region.window();
    for (const auto& iv : region.intervals()) out.value += overlap(iv, lo, hi);
    return out;
  }
  out.clipped = std::abs(center.x) + radius > region.window() ||
                std::abs(center.y) + radius > region.window();
  Rng rng(mc.seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < mc.samples; ++i) {
    const double r = radius * std::sqrt(rng.uniform());
    const double t = 2.0 * M_PI * rng.uniform();
    const Point2 p{center.x + r * std::cos(t), center.y + r * std::sin(t)};
    if (region.planar_spec().contains(p)) ++hits;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(mc.samples);
  const double area = M_PI * radius * radius;
  out.value = frac * area;
  out.std_error = area * std::sqrt(std::max(frac * (1.0 - frac), 0.0) /
                                   static_cast<double>(mc.samples));
  return out;
}

ThicknessReport thickness_profile(const Region& region, const ThicknessDensity& density,
                                  const std::vector<Point2>& centers, const McSpec& mc) {
  density.validate();
  ThicknessReport report;
  report.density = density;
  report.gamma_hat = 1.0;
  if (region.kind() == Region::Kind::line && region.intervals().empty()) {
    report.empty_region = true;
    report.gamma_hat = 0.0;
    return report;
  }
  bool any = false;
  McSpec per_center = mc;
  for (const auto& c : centers) {
    const double rho = density(c);
    per_center.seed = mc.seed + 0x1000 * static_cast<std::uint64_t>(&c - centers.data());
    const BallMeasure bm = ball_intersection_measure(region, c, rho, per_center);
    if (bm.clipped) {
      ++report.centers_clipped;
      continue;
    }
    const double ball = region.kind() == Region::Kind::line ? 2.0 * rho : M_PI * rho * rho;
    const double ratio = bm.value / ball;
    ++report.centers_used;
    any = true;
    if (ratio < report.gamma_hat) {
      report.gamma_hat = ratio;
      report.worst_center = c;
      report.worst_radius = rho;
    }
  }
  if (!any) {
    report.gamma_hat = 0.0;
    report.empty_region = region.kind() == Region::Kind::line && region.measure() == 0.0;
  }
  return report;
}

std::vector<Point2> default_centers(const Region& region, const ThicknessDensity& density) {
  density.validate();
  const double rho_min = density.scale;  // <x>^delta >= 1
  const double spacing = rho_min / 4.0;
  std::vector<Point2> centers;
  const double w = region.window();
  if (region.kind() == Region::Kind::line) {
    for (double x = -w; x <= w + 0.5 * spacing; x += spacing) centers.push_back({x, 0.0});
  } else {
    for (double x = -w; x <= w + 0.5 * spacing; x += spacing)
      for (double y = -w; y <= w + 0.5 * spacing; y += spacing) centers.push_back({x, y});
  }
  return centers;
}

LiminfSeries liminf_density(const Region& region, const std::vector<double>& radii,
                            double tail_threshold, const McSpec& mc) {
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw std::invalid_argument("liminf_density: radii must be positive");
    if (i > 0 && radii[i] <= radii[i - 1])
      throw std::invalid_argument("liminf_density: radii must be ascending");
  }
  LiminfSeries out;
  out.radii = radii;
  McSpec per = mc;
  for (size_t i = 0; i < radii.size(); ++i) {
    per.seed = mc.seed + 7919 * i;
    const BallMeasure bm = ball_intersection_measure(region, {0.0, 0.0}, radii[i], per);
    const double ball =
        region.kind() == Region::Kind::line ? 2.0 * radii[i] : M_PI * radii[i] * radii[i];
    out.ratios.push_back(bm.value / ball);
    out.std_errors.push_back(bm.std_error / ball);
  }
  if (!out.ratios.empty()) {
    const size_t tail_start = out.ratios.size() - std::max<size_t>(1, out.ratios.size() / 3);
    double tail_min = out.ratios[tail_start];
    for (size_t i = tail_start; i < out.ratios.size(); ++i)
      tail_min = std::min(tail_min, out.ratios[i]);
    out.one_weak_thick_consistent = tail_min > tail_threshold;
  }
  return out;
}

std::vector<Index> vitali_select(const std::vector<Ball>& balls) {
  std::vector<Index> order(balls.size());
  for (size_t i = 0; i < balls.size(); ++i) order[i] = static_cast<Index>(i);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return balls[a].radius > balls[b].radius;
  });
  std::vector<Index> kept;
  for (const Index i : order) {
    bool disjoint = true;
    for (const Index j : kept) {
      const double dx = balls[i].center.x - balls[j].center.x;
      const double dy = balls[i].center.y - balls[j].center.y;
      if (std::hypot(dx, dy) < balls[i].radius + balls[j].radius) {
        disjoint = false;
        break;
      }
    }
    if (disjoint) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

Region example_region_omega_delta(double delta, double window) {
  if (delta < 0.0 || delta >= 1.0)
    throw std::domain_error("omega_delta: requires 0 <= delta < 1 (the endpoint formula has a "
                            "1/(1-delta) exponent)");
  const double e = 1.0 / (1.0 - delta);
  std::vector<Interval> ivs;
  for (double n = 0.0;; n += 1.0) {
    const double a = std::pow(n, e);
    if (a > window) break;
    const double b = 0.5 * (std::pow(n, e) + std::pow(n + 1.0, e));
    ivs.push_back({a, b});
    ivs.push_back({-b, -a});
  }
  return Region::line(std::move(ivs), window);
}

Region example_region_omega_zero(double window) {
  std::vector<Interval> ivs;
  const long lo = static_cast<long>(std::floor(-window / 2.0)) - 1;
  const long hi = static_cast<long>(std::ceil(window / 2.0)) + 1;
  for (long n = lo; n <= hi; ++n)
    ivs.push_back({2.0 * static_cast<double>(n), 2.0 * static_cast<double>(n) + 1.0});
  return Region::line(std::move(ivs), window);
}

Region example_region_omega_planar(double delta, double scale, double window) {
  if (delta < 0.0 || delta > 1.0)
    throw std::domain_error("omega_planar: requires 0 <= delta <= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("omega_planar: scale must be > 0");
  PlanarSpec spec;
  spec.family = PlanarFamily::band_complement;
  spec.delta = delta;
  spec.scale = scale;
  return Region::planar(spec, window);
}

Region example_region_cone(double theta, double window) {
  if (theta < 0.0 || theta >= 0.5 * M_PI)
    throw std::domain_error("cone: requires 0 <= theta < pi/2");
  PlanarSpec spec;
  spec.family = PlanarFamily::cone;
  spec.theta = theta;
  return Region::planar(spec, window);
}

Region example_region(const std::string& name, double delta, double scale, double theta,
                      double window) {
  if (name == "omega_delta") return example_region_omega_delta(delta, window);
  if (name == "omega_zero") return example_region_omega_zero(window);
  if (name == "omega_planar") return example_region_omega_planar(delta, scale, window);
  if (name == "cone") return example_region_cone(theta, window);
  throw std::invalid_argument("example_region: unknown name " + name);
}

}  // namespace shubin
