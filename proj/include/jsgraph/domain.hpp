#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jsgraph/expression.hpp"
#include "jsgraph/geometry.hpp"
#include "jsgraph/metric.hpp"

namespace jsgraph {

enum class ArcKind { A, B, C };  // A: u -> +inf, B: u -> -inf, C: continuous data

std::string to_string(ArcKind k);
ArcKind arc_kind_from_string(const std::string& s);

struct SegmentGeom {
  Vec2 p, q;
};

struct CircularArcGeom {
  Vec2 center;
  double radius = 1.0;
  double from_angle = 0.0;
  double to_angle = 0.0;
  bool ccw = true;

  double sweep() const;  // signed sweep angle, sign matches ccw
};

struct SampledGeom {
  std::vector<Vec2> points;
};

/// Parametric arc geometry on t in [0,1], traversed start -> end.
class ArcGeometry {
 public:
  using Variant = std::variant<SegmentGeom, CircularArcGeom, SampledGeom>;

  ArcGeometry() : geom_(SegmentGeom{}) {}
  explicit ArcGeometry(Variant g) : geom_(std::move(g)) {}

  const Variant& raw() const { return geom_; }

  Vec2 point(double t) const;
  Vec2 velocity(double t) const;  // d point / dt
  Vec2 start() const { return point(0.0); }
  Vec2 end() const { return point(1.0); }
  double euclid_length() const;
  bool is_segment() const { return std::holds_alternative<SegmentGeom>(geom_); }

  // n segments -> n+1 points
  std::vector<Vec2> polyline(int n) const;

  // parameter of the point on the arc closest to p
  double project(Vec2 p) const;

  // Euclidean curvature w.r.t. the left normal of the traversal direction
  double euclid_curvature_left() const;

 private:
  Variant geom_;
};

struct Arc {
  std::string id;
  ArcKind kind = ArcKind::C;
  ArcGeometry geometry;
  std::string data_text;  // required iff kind == C
  Expression data;

  // sigma curvature w.r.t. the left normal (= inward normal on a CCW boundary)
  double sigma_curvature_left(const ConformalMetric& metric, double t) const;
};

struct DomainSpec {
  std::string name;
  ConformalMetric metric;
  std::vector<Arc> arcs;  // counterclockwise boundary chain

  // arc i runs vertices()[i] -> vertices()[(i+1) % n]
  std::vector<Vec2> vertices() const;
  size_t num_arcs() const { return arcs.size(); }

  bool has_kind(ArcKind k) const;
  std::vector<int> arcs_of_kind(ArcKind k) const;

  // bounding-box diagonal of a dense boundary sample; the length scale for slacks
  double diameter() const;

  // dense closed boundary polyline (no repeated closing point);
  // per-point arc index recorded in arc_of_point when non-null
  std::vector<Vec2> boundary_polyline(int samples_per_arc,
                                      std::vector<int>* arc_of_point = nullptr) const;

  bool point_in_closure(Vec2 p, double tol) const;

  static DomainSpec from_json_text(const std::string& text);   // throws ParseError
  static DomainSpec from_json_file(const std::string& path);
  std::string to_json_text() const;
};

enum class CheckMode { minimal, cmc, translating };

std::string to_string(CheckMode m);

struct ValidationIssue {
  std::string code;
  std::string message;
  std::vector<std::string> arc_ids;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

struct ValidationOptions {
  int samples_per_arc = 64;
  double curvature_slack = 1e-6;  // |kappa_sigma| tolerance for geodesic arcs
};

/// Structural validation: closed simple CCW boundary, A/A and B/B endpoint
/// disjointness, convex C arcs, geodesic A/B arcs in minimal/translating mode.
ValidationReport validate_domain(const DomainSpec& spec, CheckMode mode,
                                 const ValidationOptions& opt = {});

}  // namespace jsgraph
