#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jsgraph/expression.hpp"
#include "jsgraph/geometry.hpp"

namespace jsgraph {

enum class MetricKind { euclidean, poincare_disk, custom };

/// Conformal 2D Riemannian metric sigma = lambda^2 (dx^2 + dy^2).
///
/// poincare_disk(R) carries lambda = 2R / (R^2 - |p|^2), the curvature -1
/// hyperbolic metric on the Euclidean disk of radius R.
class ConformalMetric {
 public:
  ConformalMetric() = default;  // euclidean

  static ConformalMetric euclidean();
  static ConformalMetric poincare_disk(double radius);
  static ConformalMetric custom(const std::string& lambda_expr);  // throws ParseError

  MetricKind kind() const { return kind_; }
  double radius() const { return radius_; }
  const std::string& lambda_text() const { return lambda_text_; }

  // conformal factor; throws DomainError outside the definition set
  double lambda(Vec2 p) const;
  // Euclidean gradient of ln(lambda)
  Vec2 dlog_lambda(Vec2 p) const;
  bool contains(Vec2 p) const;

  bool is_euclidean() const { return kind_ == MetricKind::euclidean; }

 private:
  MetricKind kind_ = MetricKind::euclidean;
  double radius_ = 0.0;
  Expression lam_, dlam_dx_, dlam_dy_;
  std::string lambda_text_;
};

enum class CurveSide { left, right };

struct AreaOptions {
  int quadrature_order = 1;  // 1 = centroid rule, 2 = edge-midpoint rule
};

/// Metric length of a polyline, 3-point Gauss quadrature per segment.
double metric_length(std::span<const Vec2> polyline, const ConformalMetric& metric);

/// Metric length of a parametric curve on [t0,t1], 3-point Gauss per panel.
/// Spectrally accurate for smooth curves such as circular arcs.
double metric_length_param(const std::function<Vec2(double)>& point,
                           const std::function<Vec2(double)>& velocity, double t0, double t1,
                           const ConformalMetric& metric, int panels);

/// Metric area of a triangle list. Throws DegenerateInputError on zero-area triangles.
double metric_area(std::span<const Triangle2> tris, const ConformalMetric& metric,
                   const AreaOptions& opt = {});

/// Metric area with recursive 4-split refinement down to rel_tol per triangle.
double metric_area_adaptive(std::span<const Triangle2> tris, const ConformalMetric& metric,
                            double rel_tol = 1e-10, int max_depth = 12);

/// Geodesic curvature of a polyline at an interior sample, conformal-change formula
/// kappa_sigma = (kappa_e - d_nu ln lambda) / lambda with nu the Euclidean unit
/// normal on the chosen side; positive when the curve bends toward nu.
double geodesic_curvature(std::span<const Vec2> curve, const ConformalMetric& metric,
                          int index, CurveSide side);

}  // namespace jsgraph
