#include "jsgraph/metric.hpp"

#include <cmath>

#include "jsgraph/errors.hpp"

namespace jsgraph {

ConformalMetric ConformalMetric::euclidean() { return {}; }

ConformalMetric ConformalMetric::poincare_disk(double radius) {
  if (!(radius > 0.0)) throw DomainError("poincare_disk: radius must be positive");
  ConformalMetric m;
  m.kind_ = MetricKind::poincare_disk;
  m.radius_ = radius;
  return m;
}

ConformalMetric ConformalMetric::custom(const std::string& lambda_expr) {
  ConformalMetric m;
  m.kind_ = MetricKind::custom;
  m.lam_ = Expression::parse(lambda_expr);
  m.dlam_dx_ = m.lam_.derivative('x');
  m.dlam_dy_ = m.lam_.derivative('y');
  m.lambda_text_ = lambda_expr;
  return m;
}

bool ConformalMetric::contains(Vec2 p) const {
  if (kind_ == MetricKind::poincare_disk) return norm2(p) < radius_ * radius_;
  return true;
}

double ConformalMetric::lambda(Vec2 p) const {
  switch (kind_) {
    case MetricKind::euclidean:
      return 1.0;
    case MetricKind::poincare_disk: {
      const double d = radius_ * radius_ - norm2(p);
      if (d <= 0.0)
        throw DomainError("poincare_disk: point outside the disk of radius " +
                          std::to_string(radius_));
      return 2.0 * radius_ / d;
    }
    case MetricKind::custom: {
      const double v = lam_.eval(p.x, p.y);
      if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError("custom metric: lambda not positive at (" + std::to_string(p.x) +
                          ", " + std::to_string(p.y) + ")");
      return v;
    }
  }
  return 1.0;
}

Vec2 ConformalMetric::dlog_lambda(Vec2 p) const {
  switch (kind_) {
    case MetricKind::euclidean:
      return {0.0, 0.0};
    case MetricKind::poincare_disk: {
      const double d = radius_ * radius_ - norm2(p);
      if (d <= 0.0) throw DomainError("poincare_disk: point outside the disk");
      return {2.0 * p.x / d, 2.0 * p.y / d};
    }
    case MetricKind::custom: {
      const double v = lambda(p);
      return {dlam_dx_.eval(p.x, p.y) / v, dlam_dy_.eval(p.x, p.y) / v};
    }
  }
  return {0.0, 0.0};
}

namespace {

// 3-point Gauss-Legendre on [0,1]
constexpr double kGaussX[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr double kGaussW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

double metric_length(std::span<const Vec2> polyline, const ConformalMetric& metric) {
  if (polyline.size() < 2) throw DegenerateInputError("metric_length: need >= 2 points");
  double total = 0.0;
  for (size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Vec2 a = polyline[i], b = polyline[i + 1];
    const double seg = dist(a, b);
    if (metric.is_euclidean()) {
      total += seg;
      continue;
    }
    double q = 0.0;
    for (int g = 0; g < 3; ++g) q += kGaussW[g] * metric.lambda(lerp(a, b, kGaussX[g]));
    total += q * seg;
  }
  return total;
}

double metric_length_param(const std::function<Vec2(double)>& point,
                           const std::function<Vec2(double)>& velocity, double t0, double t1,
                           const ConformalMetric& metric, int panels) {
  double total = 0.0;
  const double dt = (t1 - t0) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = t0 + p * dt;
    double q = 0.0;
    for (int g = 0; g < 3; ++g) {
      const double t = a + kGaussX[g] * dt;
      q += kGaussW[g] * metric.lambda(point(t)) * norm(velocity(t));
    }
    total += q * dt;
  }
  return std::abs(total);
}

namespace {

double triangle_metric_area(const Triangle2& t, const ConformalMetric& metric, int order) {
  const double area = triangle_area(t);
  if (metric.is_euclidean()) return std::abs(area);
  if (order <= 1) {
    const Vec2 c = (t.a + t.b + t.c) / 3.0;
    const double lam = metric.lambda(c);
    return std::abs(area) * lam * lam;
  }
  // edge-midpoint rule, exact for quadratics
  const Vec2 m0 = (t.a + t.b) * 0.5, m1 = (t.b + t.c) * 0.5, m2 = (t.c + t.a) * 0.5;
  double s = 0.0;
  for (const Vec2& m : {m0, m1, m2}) {
    const double lam = metric.lambda(m);
    s += lam * lam;
  }
  return std::abs(area) * s / 3.0;
}

double adaptive_tri(const Triangle2& t, const ConformalMetric& metric, double abs_tol,
                    int depth) {
  const double coarse = triangle_metric_area(t, metric, 2);
  const Vec2 m0 = (t.a + t.b) * 0.5, m1 = (t.b + t.c) * 0.5, m2 = (t.c + t.a) * 0.5;
  const Triangle2 kids[4] = {{t.a, m0, m2}, {m0, t.b, m1}, {m2, m1, t.c}, {m0, m1, m2}};
  double fine = 0.0;
  for (const auto& k : kids) fine += triangle_metric_area(k, metric, 2);
  if (depth <= 0 || std::abs(fine - coarse) <= abs_tol) return fine;
  double out = 0.0;
  for (const auto& k : kids) out += adaptive_tri(k, metric, abs_tol / 4.0, depth - 1);
  return out;
}

}  // namespace

double metric_area(std::span<const Triangle2> tris, const ConformalMetric& metric,
                   const AreaOptions& opt) {
  double total = 0.0;
  for (const auto& t : tris) {
    if (triangle_area(t) == 0.0)
      throw DegenerateInputError("metric_area: degenerate triangle");
    total += triangle_metric_area(t, metric, opt.quadrature_order);
  }
  return total;
}

double metric_area_adaptive(std::span<const Triangle2> tris, const ConformalMetric& metric,
                            double rel_tol, int max_depth) {
  double coarse = 0.0;
  for (const auto& t : tris) coarse += triangle_metric_area(t, metric, 2);
  if (coarse == 0.0) return 0.0;
  double total = 0.0;
  const double per_tri = rel_tol * coarse / static_cast<double>(tris.size());
  for (const auto& t : tris) total += adaptive_tri(t, metric, per_tri, max_depth);
  return total;
}

double geodesic_curvature(std::span<const Vec2> curve, const ConformalMetric& metric,
                          int index, CurveSide side) {
  if (index <= 0 || index + 1 >= static_cast<int>(curve.size()))
    throw DegenerateInputError("geodesic_curvature: index needs neighbors on both sides");
  const Vec2 p0 = curve[index - 1], p1 = curve[index], p2 = curve[index + 1];
  // signed w.r.t. the left normal; flip for the right side
  double kappa_e = circumcircle_curvature(p0, p1, p2);
  Vec2 tangent = normalized(p2 - p0);
  Vec2 nu = perp(tangent);  // left normal
  if (side == CurveSide::right) {
    kappa_e = -kappa_e;
    nu = -nu;
  }
  if (metric.is_euclidean()) return kappa_e;
  const double lam = metric.lambda(p1);
  const double dnu = dot(metric.dlog_lambda(p1), nu);
  return (kappa_e - dnu) / lam;
}

}  // namespace jsgraph
