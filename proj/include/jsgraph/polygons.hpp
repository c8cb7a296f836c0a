#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jsgraph/domain.hpp"

namespace jsgraph {

struct PolygonSide {
  enum class Type { boundary_arc, chord, cmc_arc };
  Type type = Type::chord;
  int from_vertex = -1;        // indices into DomainSpec vertices
  int to_vertex = -1;
  // boundary arcs this side lies along: the single arc for a boundary side,
  // or a covered run of arcs when a chord/cmc side follows the boundary
  // through intermediate vertices (their lengths count toward alpha/beta)
  std::vector<int> on_arcs;
  bool bulge_left = false;     // cmc arc center on the left of the chord
  std::vector<Vec2> polyline;  // dense geometry, from -> to
  double sigma_length = 0.0;
  double green_term = 0.0;     // exact contribution of integral (x dy - y dx)/2
};

struct AdmissiblePolygon {
  std::string id;
  std::vector<int> vertex_indices;  // cyclic boundary order
  std::vector<PolygonSide> sides;   // side k joins vertex k -> k+1 (cyclic)
  bool is_whole_boundary = false;
  bool indeterminate = false;  // a conformal geodesic side failed to converge
};

struct EnumerateOptions {
  int vertex_cap = 16;            // refuse domains with more vertices
  int samples_per_unit = 64;      // containment sampling density (per unit length)
  int min_side_samples = 16;
  double containment_tol_rel = 1e-9;
  int geodesic_points = 65;       // interior geodesic discretization (conformal)
  int geodesic_max_iter = 4000;
  size_t max_polygons = 200000;   // combinatorial cap for CMC side assignments
};

/// All admissible polygons of the domain: vertex subsets in boundary cyclic
/// order with geodesic-chord sides (minimal/translating) or curvature +-H arc
/// sides (cmc, Euclidean only), simple and contained in the domain closure.
/// The whole boundary is always included and flagged.
std::vector<AdmissiblePolygon> enumerate_admissible_polygons(
    const DomainSpec& spec, CheckMode mode, double H = 0.0,
    const EnumerateOptions& opt = {});

/// Two-point geodesic for a conformal metric by damped minimization of the
/// discrete length energy. Returns nullopt when the solve does not converge.
std::optional<std::vector<Vec2>> two_point_geodesic(const ConformalMetric& metric, Vec2 a,
                                                    Vec2 b, int points, int max_iter);

}  // namespace jsgraph
