#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "jsgraph/domain.hpp"
#include "jsgraph/geometry.hpp"

namespace jsgraph {

enum class VertexMarkerKind { interior, on_arc, domain_vertex };

struct VertexMarker {
  VertexMarkerKind kind = VertexMarkerKind::interior;
  std::string arc_id;  // set when kind == on_arc
};

struct BoundaryEdge {
  int a = -1, b = -1;  // oriented along the boundary (interior on the left)
  std::string arc_id;
};

struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<VertexMarker> markers;
  double h_nominal = 0.0;
  std::vector<Arc> arcs;  // arc geometry snapshot; empty for file-loaded meshes

  double total_area() const;
  double min_angle_deg() const;
  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }

  // re-binds arc geometry (after read_jsmesh) so refine() can project
  void attach_arcs(const DomainSpec& spec);
  const Arc* arc_by_id(const std::string& id) const;
};

struct MeshOptions {
  double min_angle_deg = 20.0;
  double size_factor = 1.5;    // longest edge <= size_factor * local target size
  int max_vertices = 200000;
  int max_passes = 80;
  // grade toward every boundary arc, not just the blow-up arcs (useful for
  // convergence studies with steep Dirichlet data)
  bool grade_all_boundary = false;
};

/// Conforming graded triangulation of the polyline-approximated domain.
/// Target edge length h in the interior and h/grading within 2h of the
/// blow-up (A/B) arcs. Deterministic for fixed inputs.
TriMesh generate_mesh(const DomainSpec& spec, double h, double grading,
                      const MeshOptions& opt = {});

/// Uniform 4-split; boundary midpoints are projected onto the true arc
/// geometry when it is attached.
TriMesh refine(const TriMesh& mesh);

void write_jsmesh(const TriMesh& mesh, std::ostream& out);
void write_jsmesh_file(const TriMesh& mesh, const std::string& path);
TriMesh read_jsmesh(std::istream& in);
TriMesh read_jsmesh_file(const std::string& path);

}  // namespace jsgraph
