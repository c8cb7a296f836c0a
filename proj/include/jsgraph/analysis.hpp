#pragma once

#include <vector>

#include "jsgraph/domain.hpp"
#include "jsgraph/mesh.hpp"
#include "jsgraph/solver.hpp"

namespace jsgraph {

/// A solution graph with its induced area elements.
struct GraphSurface {
  const TriMesh* mesh = nullptr;
  const ConformalMetric* metric = nullptr;
  std::vector<double> heights;  // nodal u
};

GraphSurface make_surface(const TriMesh& mesh, const ConformalMetric& metric,
                          std::vector<double> heights);

struct WeightedArea {
  double log_value = 0.0;  // log of the weighted area, always finite
  bool overflowed = false; // |c u| exceeded the plain-evaluation range
  double value() const;    // exp(log_value); +inf when it overflows a double
};

/// Ilmanen weighted area: sum over triangles of e^{c <u>} W lambda^2 area,
/// accumulated in log-sum-exp form when the heights are extreme.
WeightedArea weighted_area(const GraphSurface& surface, double c);

struct MinimalityReport {
  int trials = 0;
  int first_order_failures = 0;   // A_c[u + eps phi] < A_c[u] - tol
  int second_order_failures = 0;  // negative second difference beyond tol
  std::vector<unsigned> failing_seeds;
  double worst_first_order = 0.0;   // most negative (A_c[u+eps phi] - A_c[u]) + tol margin
  double worst_second_diff = 0.0;   // most negative second difference
  double tol_quad = 0.0;
  bool pass = false;
};

/// Random interior-supported perturbations of a converged translator graph:
/// the weighted area must not decrease to first order, and the symmetric
/// second difference must stay nonnegative (up to quadrature slack).
MinimalityReport minimality_test(const GraphSurface& surface, double c, int trials,
                                 unsigned seed,
                                 const std::vector<double>& epsilons = {1e-2, 1e-3});

struct BoundaryVerdict {
  std::string arc_id;
  double expected = 0.0;
  double max_deviation = 0.0;
  int samples = 0;
  bool pass = false;
};

/// Geodesic curvature of a blow-up arc against the theorem's prediction:
/// 0 for minimal/translator, +H0 (A) or -H0 (B) for cmc. C arcs are refused.
BoundaryVerdict boundary_curvature_verdict(const DomainSpec& spec, const std::string& arc_id,
                                           ProblemKind kind, int samples = 64,
                                           double tol = 1e-4);

/// Weighted mean curvature of the cylinder Lambda x R in Ilmanen's metric.
double cylinder_weighted_H(double kappa_sigma, double t, double c, int m);

struct EntropyReport {
  double sup_ratio = 0.0;
  int argmax_center = -1;
  double argmax_radius = 0.0;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

/// sup over (center, radius) pairs of Area(surface within B(x,r)) / r^2,
/// unweighted Euclidean graph area, clipped by recursive subdivision.
EntropyReport entropy_ratio(const GraphSurface& surface, const std::vector<Vec3>& centers,
                            const std::vector<double>& radii);

}  // namespace jsgraph
