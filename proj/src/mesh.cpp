#include "jsgraph/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "jsgraph/errors.hpp"

namespace jsgraph {

namespace {

double tri_min_angle(Vec2 a, Vec2 b, Vec2 c) {
  const double la = dist(b, c), lb = dist(c, a), lc = dist(a, b);
  auto ang = [](double opp, double s1, double s2) {
    const double arg = std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2), -1.0, 1.0);
    return std::acos(arg);
  };
  return std::min({ang(la, lb, lc), ang(lb, lc, la), ang(lc, la, lb)});
}

// ---------------------------------------------------------------------------
// Lawson-flip constrained Delaunay triangulation
// ---------------------------------------------------------------------------

struct Delaunay {
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb;  // neighbor across edge i = (v[i], v[i+1])
    bool alive = true;
  };

  std::vector<Vec2> pts;
  std::vector<Tri> tris;
  std::map<std::pair<int, int>, int> constrained;  // normalized edge -> segment index
  double eps_area = 1e-24;
  int last_hint = 0;

  static std::pair<int, int> key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

  bool is_constrained(int a, int b) const { return constrained.count(key(a, b)) > 0; }

  double orient(int a, int b, Vec2 p) const { return cross(pts[b] - pts[a], p - pts[a]); }

  bool in_circumcircle(const Tri& t, Vec2 p) const {
    const Vec2 a = pts[t.v[0]] - p, b = pts[t.v[1]] - p, c = pts[t.v[2]] - p;
    const double det = (norm2(a)) * cross(b, c) - (norm2(b)) * cross(a, c) +
                       (norm2(c)) * cross(a, b);
    return det > eps_area;  // strictly inside
  }

  int edge_index(const Tri& t, int a, int b) const {
    for (int i = 0; i < 3; ++i) {
      const int u = t.v[i], w = t.v[(i + 1) % 3];
      if ((u == a && w == b) || (u == b && w == a)) return i;
    }
    return -1;
  }

  void set_neighbor(int t, int a, int b, int n) {
    if (t < 0) return;
    const int i = edge_index(tris[t], a, b);
    if (i >= 0) tris[t].nb[i] = n;
  }

  // walk from the hint to a triangle containing p
  int locate(Vec2 p) const {
    int t = last_hint;
    if (t < 0 || t >= static_cast<int>(tris.size()) || !tris[t].alive) {
      t = -1;
      for (int i = static_cast<int>(tris.size()) - 1; i >= 0; --i)
        if (tris[i].alive) { t = i; break; }
      if (t < 0) throw NumericError("locate: empty triangulation");
    }
    const int guard = 4 * static_cast<int>(tris.size()) + 64;
    int prev = -1;
    for (int step = 0; step < guard; ++step) {
      const Tri& tr = tris[t];
      int next = -1;
      double worst = -eps_area;
      for (int i = 0; i < 3; ++i) {
        const double o = orient(tr.v[i], tr.v[(i + 1) % 3], p);
        if (o < worst && tr.nb[i] >= 0 && tr.nb[i] != prev) {
          worst = o;
          next = tr.nb[i];
        }
      }
      if (next < 0) {
        // allow stepping back if everything else is non-negative
        for (int i = 0; i < 3; ++i) {
          const double o = orient(tr.v[i], tr.v[(i + 1) % 3], p);
          if (o < -eps_area && tr.nb[i] >= 0) { next = tr.nb[i]; break; }
        }
      }
      if (next < 0) return t;
      prev = t;
      t = next;
    }
    throw NumericError("locate: walk did not terminate");
  }

  void legalize(std::vector<std::pair<int, int>>& stack) {
    // stack holds (triangle, edge index): the edge opposite the new point
    int guard = 0;
    const int cap = 64 * static_cast<int>(tris.size()) + 4096;
    while (!stack.empty()) {
      if (++guard > cap) throw NumericError("legalize: flip loop did not terminate");
      auto [t, i] = stack.back();
      stack.pop_back();
      if (t < 0 || !tris[t].alive) continue;
      const int u = tris[t].nb[i];
      if (u < 0 || !tris[u].alive) continue;
      const int a = tris[t].v[i], b = tris[t].v[(i + 1) % 3];
      if (is_constrained(a, b)) continue;
      const int c = tris[t].v[(i + 2) % 3];
      const int j = edge_index(tris[u], a, b);
      const int d = tris[u].v[(j + 2) % 3];
      if (!in_circumcircle(tris[t], pts[d])) continue;
      // flip (a,b) -> (c,d): t = (a,d,c), u = (d,b,c)
      const int n_ad = tris[u].nb[edge_index(tris[u], a, d)];
      const int n_db = tris[u].nb[edge_index(tris[u], d, b)];
      const int n_bc = tris[t].nb[edge_index(tris[t], b, c)];
      const int n_ca = tris[t].nb[edge_index(tris[t], c, a)];
      tris[t].v = {a, d, c};
      tris[t].nb = {n_ad, u, n_ca};
      tris[u].v = {d, b, c};
      tris[u].nb = {n_db, n_bc, t};
      set_neighbor(n_ad, a, d, t);
      set_neighbor(n_bc, b, c, u);
      // n_ca and n_db keep pointing to t and u already
      set_neighbor(n_ca, c, a, t);
      set_neighbor(n_db, d, b, u);
      stack.push_back({t, 0});   // edge (a,d)
      stack.push_back({u, 0});   // edge (d,b)
    }
  }

  // insert a point known to lie inside the triangulation; returns its index
  int insert(Vec2 p) {
    const int t0 = locate(p);
    const int pi = static_cast<int>(pts.size());
    pts.push_back(p);

    const Tri old = tris[t0];
    // on-edge test
    int on_edge = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
      const double o = std::abs(orient(old.v[i], old.v[(i + 1) % 3], p));
      const double len = dist(pts[old.v[i]], pts[old.v[(i + 1) % 3]]);
      if (o < best && o <= 1e-12 * len * len + eps_area) {
        best = o;
        on_edge = i;
      }
    }

    std::vector<std::pair<int, int>> suspects;
    if (on_edge < 0) {
      // split t0 into three
      const int a = old.v[0], b = old.v[1], c = old.v[2];
      const int t1 = static_cast<int>(tris.size());
      const int t2 = t1 + 1;
      tris[t0] = {{a, b, pi}, {old.nb[0], t1, t2}, true};
      tris.push_back({{b, c, pi}, {old.nb[1], t2, t0}, true});
      tris.push_back({{c, a, pi}, {old.nb[2], t0, t1}, true});
      set_neighbor(old.nb[1], b, c, t1);
      set_neighbor(old.nb[2], c, a, t2);
      suspects = {{t0, 0}, {t1, 0}, {t2, 0}};
    } else {
      // split the edge (a,b) shared with u (if any) into four triangles
      const int i = on_edge;
      const int a = old.v[i], b = old.v[(i + 1) % 3], c = old.v[(i + 2) % 3];
      const int u = old.nb[i];
      const int n_bc = old.nb[(i + 1) % 3];
      const int n_ca = old.nb[(i + 2) % 3];
      const int t1 = static_cast<int>(tris.size());
      tris[t0] = {{a, pi, c}, {-1, t1, n_ca}, true};
      tris.push_back({{pi, b, c}, {-1, n_bc, t0}, true});
      set_neighbor(n_bc, b, c, t1);
      suspects = {{t0, 2}, {t1, 1}};
      if (u >= 0) {
        const Tri oldu = tris[u];
        const int j = edge_index(oldu, a, b);
        const int d = oldu.v[(j + 2) % 3];
        const int n_bd = oldu.nb[edge_index(oldu, b, d)];
        const int n_da = oldu.nb[edge_index(oldu, d, a)];
        const int t2 = static_cast<int>(tris.size());
        tris[u] = {{pi, a, d}, {t0, n_da, t2}, true};
        tris.push_back({{b, pi, d}, {t1, t2, n_bd}, true});
        set_neighbor(n_da, d, a, u);
        set_neighbor(n_bd, b, d, t2);
        tris[t0].nb[0] = u;
        tris[t1].nb[0] = t2;
        tris[u].nb[2] = t2;
        tris[t2].nb[1] = u;
        suspects.push_back({u, 1});
        suspects.push_back({t2, 2});
        // split a constrained edge: the caller must have updated the set
      }
    }
    legalize(suspects);
    last_hint = t0;
    return pi;
  }

  // flip the shared edge (p,q) of t and its neighbor across edge i
  void flip_edge(int t, int i) {
    const int u = tris[t].nb[i];
    const int p = tris[t].v[i], q = tris[t].v[(i + 1) % 3];
    const int c = tris[t].v[(i + 2) % 3];
    const int j = edge_index(tris[u], p, q);
    const int d = tris[u].v[(j + 2) % 3];
    const int n_pd = tris[u].nb[edge_index(tris[u], p, d)];
    const int n_dq = tris[u].nb[edge_index(tris[u], d, q)];
    const int n_qc = tris[t].nb[edge_index(tris[t], q, c)];
    const int n_cp = tris[t].nb[edge_index(tris[t], c, p)];
    tris[t].v = {p, d, c};
    tris[t].nb = {n_pd, u, n_cp};
    tris[u].v = {d, q, c};
    tris[u].nb = {n_dq, n_qc, t};
    set_neighbor(n_pd, p, d, t);
    set_neighbor(n_qc, q, c, u);
    set_neighbor(n_cp, c, p, t);
    set_neighbor(n_dq, d, q, u);
  }

  // make (a,b) an edge by flipping the edges that cross it
  void recover_edge(int a, int b) {
    const int cap = 16 * static_cast<int>(tris.size()) + 1024;
    for (int guard = 0; guard < cap; ++guard) {
      if (find_edge(a, b).first >= 0) return;
      const auto crossings = find_crossings(a, b);
      if (crossings.empty()) throw NumericError("recover_edge: no crossing found");
      bool flipped = false;
      for (const auto& [t, i] : crossings) {
        if (!tris[t].alive) continue;
        const int u = tris[t].nb[i];
        if (u < 0) continue;
        const int p = tris[t].v[i], q = tris[t].v[(i + 1) % 3];
        if (is_constrained(p, q))
          throw NumericError("recover_edge: boundary chains cross; domain is unmeshable");
        const int c = tris[t].v[(i + 2) % 3];
        const int j = edge_index(tris[u], p, q);
        const int d = tris[u].v[(j + 2) % 3];
        // flip only convex quads
        if (orient(c, d, pts[p]) * orient(c, d, pts[q]) < 0) {
          flip_edge(t, i);
          flipped = true;
          break;
        }
      }
      if (!flipped) throw NumericError("recover_edge: stuck on non-convex crossings");
    }
    throw NumericError("recover_edge: did not converge");
  }

  std::pair<int, int> find_edge(int a, int b) const {
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!tris[t].alive) continue;
      const int i = edge_index(tris[t], a, b);
      if (i >= 0) return {t, i};
    }
    return {-1, -1};
  }

  // alive edges properly crossed by segment a->b
  std::vector<std::pair<int, int>> find_crossings(int a, int b) const {
    std::vector<std::pair<int, int>> out;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!tris[t].alive) continue;
      for (int i = 0; i < 3; ++i) {
        const int p = tris[t].v[i], q = tris[t].v[(i + 1) % 3];
        if (p == a || p == b || q == a || q == b) continue;
        if (p > q) continue;  // visit each edge once
        if (segments_intersect(pts[a], pts[b], pts[p], pts[q], 0.0)) out.push_back({t, i});
      }
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// boundary sampling, segments, refinement
// ---------------------------------------------------------------------------

struct BoundarySegment {
  int pa, pb;       // point indices
  int arc_index;
  double ta, tb;    // parameters on the arc
};

struct PointInfo {
  VertexMarkerKind kind = VertexMarkerKind::interior;
  int arc_index = -1;
};

struct SizeField {
  double h;
  double h_fine;
  std::vector<Vec2> blowup_samples;  // dense samples of the A/B arcs

  double operator()(Vec2 p) const {
    if (blowup_samples.empty()) return h;
    double d2 = std::numeric_limits<double>::infinity();
    for (const auto& q : blowup_samples) d2 = std::min(d2, norm2(p - q));
    const double d = std::sqrt(d2);
    if (d <= 2.0 * h) return h_fine;
    return std::min(h, h_fine + 0.5 * (d - 2.0 * h));
  }
};

}  // namespace

double TriMesh::total_area() const {
  double s = 0.0;
  for (const auto& t : triangles)
    s += 0.5 * cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
  return s;
}

double TriMesh::min_angle_deg() const {
  double m = 180.0;
  for (const auto& t : triangles)
    m = std::min(m, tri_min_angle(vertices[t[0]], vertices[t[1]], vertices[t[2]]) * 180.0 /
                        M_PI);
  return m;
}

void TriMesh::attach_arcs(const DomainSpec& spec) { arcs = spec.arcs; }

const Arc* TriMesh::arc_by_id(const std::string& id) const {
  for (const auto& a : arcs)
    if (a.id == id) return &a;
  return nullptr;
}

TriMesh generate_mesh(const DomainSpec& spec, double h, double grading,
                      const MeshOptions& opt) {
  if (!(h > 0)) throw DomainError("generate_mesh: h must be positive");
  if (!(grading >= 1)) throw DomainError("generate_mesh: grading must be >= 1");
  {
    const auto validation = validate_domain(spec, CheckMode::cmc);  // structural only
    if (!validation.ok)
      throw DomainError("generate_mesh: invalid domain: " + validation.issues.front().message);
  }
  double shortest = std::numeric_limits<double>::infinity();
  for (const auto& arc : spec.arcs) shortest = std::min(shortest, arc.geometry.euclid_length());
  if (h >= shortest)
    throw DomainError("generate_mesh: h = " + std::to_string(h) +
                      " is not smaller than the shortest arc length " +
                      std::to_string(shortest));

  SizeField size{h, h / grading, {}};
  for (const auto& arc : spec.arcs) {
    if (arc.kind == ArcKind::C && !opt.grade_all_boundary) continue;
    const int n = std::max(8, static_cast<int>(std::ceil(arc.geometry.euclid_length() /
                                                         (0.5 * size.h_fine))));
    const auto pts = arc.geometry.polyline(n);
    size.blowup_samples.insert(size.blowup_samples.end(), pts.begin(), pts.end());
  }

  // boundary sampling: step h on C arcs, h/grading on A/B arcs
  Delaunay dt;
  std::vector<PointInfo> info;
  std::vector<BoundarySegment> segments;

  // bounding box and super-triangle
  const auto outline = spec.boundary_polyline(64);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : outline) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  const double ext = std::max(xmax - xmin, ymax - ymin);
  dt.eps_area = 1e-24 * ext * ext * ext * ext;
  dt.pts = {{cx - 20 * ext, cy - 10 * ext}, {cx + 20 * ext, cy - 10 * ext},
            {cx, cy + 20 * ext}};
  dt.tris.push_back({{0, 1, 2}, {-1, -1, -1}, true});
  info.resize(3);

  // insert boundary points arc by arc (arc endpoints belong to the next arc)
  const int n_arcs = static_cast<int>(spec.arcs.size());
  std::vector<std::vector<int>> arc_pts(n_arcs);
  for (int ai = 0; ai < n_arcs; ++ai) {
    const Arc& arc = spec.arcs[ai];
    const double step =
        (arc.kind == ArcKind::C && !opt.grade_all_boundary) ? h : h / grading;
    const int n = std::max(1, static_cast<int>(std::ceil(arc.geometry.euclid_length() / step)));
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / n;
      const int pi = dt.insert(arc.geometry.point(t));
      info.push_back({i == 0 ? VertexMarkerKind::domain_vertex : VertexMarkerKind::on_arc, ai});
      arc_pts[ai].push_back(pi);
    }
  }
  for (int ai = 0; ai < n_arcs; ++ai) {
    const int n = static_cast<int>(arc_pts[ai].size());
    for (int i = 0; i < n; ++i) {
      const int pa = arc_pts[ai][i];
      const int pb = i + 1 < n ? arc_pts[ai][i + 1] : arc_pts[(ai + 1) % n_arcs][0];
      segments.push_back({pa, pb, ai, static_cast<double>(i) / n,
                          static_cast<double>(i + 1) / n});
    }
  }

  // recover and mark the constrained boundary edges
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    const auto& seg = segments[s];
    if (dt.find_edge(seg.pa, seg.pb).first < 0) dt.recover_edge(seg.pa, seg.pb);
    dt.constrained[Delaunay::key(seg.pa, seg.pb)] = s;
  }

  // mark exterior triangles by flooding from the super vertices
  auto mark_exterior = [&]() {
    std::vector<char> exterior(dt.tris.size(), 0);
    std::vector<int> stack;
    for (int t = 0; t < static_cast<int>(dt.tris.size()); ++t) {
      if (!dt.tris[t].alive) continue;
      for (int i = 0; i < 3; ++i)
        if (dt.tris[t].v[i] < 3) {
          exterior[t] = 1;
          stack.push_back(t);
          break;
        }
    }
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int i = 0; i < 3; ++i) {
        const int u = dt.tris[t].nb[i];
        if (u < 0 || exterior[u] || !dt.tris[u].alive) continue;
        if (dt.is_constrained(dt.tris[t].v[i], dt.tris[t].v[(i + 1) % 3])) continue;
        exterior[u] = 1;
        stack.push_back(u);
      }
    }
    return exterior;
  };

  // --- refinement -----------------------------------------------------------

  auto split_segment = [&](int s) {
    BoundarySegment seg = segments[s];
    const double tm = 0.5 * (seg.ta + seg.tb);
    const Vec2 m = spec.arcs[seg.arc_index].geometry.point(tm);
    dt.constrained.erase(Delaunay::key(seg.pa, seg.pb));
    const int pm = dt.insert(m);
    info.push_back({VertexMarkerKind::on_arc, seg.arc_index});
    const int s2 = static_cast<int>(segments.size());
    segments.push_back({pm, seg.pb, seg.arc_index, tm, seg.tb});
    segments[s] = {seg.pa, pm, seg.arc_index, seg.ta, tm};
    dt.constrained[Delaunay::key(seg.pa, pm)] = s;
    dt.constrained[Delaunay::key(pm, seg.pb)] = s2;
    return pm;
  };

  auto encroaches = [&](Vec2 p, int s) {
    const auto& seg = segments[s];
    const Vec2 mid = (dt.pts[seg.pa] + dt.pts[seg.pb]) * 0.5;
    const double r = 0.5 * dist(dt.pts[seg.pa], dt.pts[seg.pb]);
    return dist(p, mid) < r * (1.0 - 1e-12);
  };

  // initial encroachment resolution
  for (int pass = 0; pass < opt.max_passes; ++pass) {
    bool acted = false;
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
      for (int p = 3; p < static_cast<int>(dt.pts.size()); ++p) {
        if (p == segments[s].pa || p == segments[s].pb) continue;
        if (encroaches(dt.pts[p], s)) {
          split_segment(s);
          acted = true;
          break;
        }
      }
    }
    if (!acted) break;
  }

  // quality + size refinement
  const double min_angle_rad = opt.min_angle_deg * M_PI / 180.0;
  for (int pass = 0; pass < opt.max_passes; ++pass) {
    const auto exterior = mark_exterior();
    bool acted = false;
    const int tri_count = static_cast<int>(dt.tris.size());
    for (int t = 0; t < tri_count; ++t) {
      if (!dt.tris[t].alive || exterior[t]) continue;
      if (static_cast<int>(dt.pts.size()) >= opt.max_vertices)
        throw NumericError("generate_mesh: vertex budget exceeded; geometry may be unmeshable");
      const auto& tv = dt.tris[t].v;
      const Vec2 a = dt.pts[tv[0]], b = dt.pts[tv[1]], c = dt.pts[tv[2]];
      const Vec2 centroid = (a + b + c) / 3.0;
      const double longest = std::max({dist(a, b), dist(b, c), dist(c, a)});
      const double target = size(centroid);
      const bool too_big = longest > opt.size_factor * target;
      const bool bad_angle = tri_min_angle(a, b, c) < min_angle_rad;
      if (!too_big && !bad_angle) continue;

      // circumcenter
      const double d = 2.0 * cross(b - a, c - a);
      if (d == 0.0) continue;
      const double la = norm2(a), lb = norm2(b), lc = norm2(c);
      const Vec2 cc{(la * (b.y - c.y) + lb * (c.y - a.y) + lc * (a.y - b.y)) / d,
                    (la * (c.x - b.x) + lb * (a.x - c.x) + lc * (b.x - a.x)) / d};

      // if the circumcenter encroaches a segment, split that segment instead
      int enc = -1;
      for (int s = 0; s < static_cast<int>(segments.size()); ++s)
        if (encroaches(cc, s)) { enc = s; break; }
      if (enc >= 0) {
        split_segment(enc);
        acted = true;
        continue;
      }
      // skip tiny insertions near existing vertices (sharp-corner guard)
      bool too_close = false;
      for (const int vi : tv)
        too_close = too_close || dist(cc, dt.pts[vi]) < 0.25 * target;
      if (too_close) continue;
      dt.insert(cc);
      info.push_back({VertexMarkerKind::interior, -1});
      acted = true;
    }
    if (!acted) break;
  }

  // --- extraction -----------------------------------------------------------

  const auto exterior = mark_exterior();
  TriMesh mesh;
  mesh.h_nominal = h;
  mesh.arcs = spec.arcs;
  std::vector<int> remap(dt.pts.size(), -1);
  for (int t = 0; t < static_cast<int>(dt.tris.size()); ++t) {
    if (!dt.tris[t].alive || exterior[t]) continue;
    std::array<int, 3> tv{};
    for (int i = 0; i < 3; ++i) {
      const int p = dt.tris[t].v[i];
      if (remap[p] < 0) {
        remap[p] = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(dt.pts[p]);
        VertexMarker m;
        m.kind = info[p].kind;
        if (m.kind == VertexMarkerKind::on_arc) m.arc_id = spec.arcs[info[p].arc_index].id;
        mesh.markers.push_back(std::move(m));
      }
      tv[i] = remap[p];
    }
    if (cross(mesh.vertices[tv[1]] - mesh.vertices[tv[0]],
              mesh.vertices[tv[2]] - mesh.vertices[tv[0]]) <= 0)
      throw NumericError("generate_mesh: inverted triangle in the output");
    mesh.triangles.push_back(tv);
  }
  for (const auto& seg : segments) {
    if (remap[seg.pa] < 0 || remap[seg.pb] < 0)
      throw NumericError("generate_mesh: boundary vertex missing from the output");
    mesh.boundary_edges.push_back({remap[seg.pa], remap[seg.pb], spec.arcs[seg.arc_index].id});
  }
  std::sort(mesh.boundary_edges.begin(), mesh.boundary_edges.end(),
            [](const BoundaryEdge& x, const BoundaryEdge& y) {
              return std::tie(x.a, x.b) < std::tie(y.a, y.b);
            });
  return mesh;
}

TriMesh refine(const TriMesh& mesh) {
  TriMesh out;
  out.h_nominal = mesh.h_nominal / 2.0;
  out.arcs = mesh.arcs;
  out.vertices = mesh.vertices;
  out.markers = mesh.markers;

  std::map<std::pair<int, int>, std::string> boundary_arc;
  for (const auto& e : mesh.boundary_edges)
    boundary_arc[{std::min(e.a, e.b), std::max(e.a, e.b)}] = e.arc_id;

  std::map<std::pair<int, int>, int> midpoint;
  auto mid_of = [&](int a, int b) {
    const auto k = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    const Vec2 chord_mid = (mesh.vertices[a] + mesh.vertices[b]) * 0.5;
    Vec2 m = chord_mid;
    VertexMarker marker;  // interior by default
    auto bit = boundary_arc.find(k);
    if (bit != boundary_arc.end()) {
      marker.kind = VertexMarkerKind::on_arc;
      marker.arc_id = bit->second;
      if (const Arc* arc = mesh.arc_by_id(bit->second)) {
        const double tm = 0.5 * (arc->geometry.project(mesh.vertices[a]) +
                                 arc->geometry.project(mesh.vertices[b]));
        m = arc->geometry.point(tm);
      }
    }
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back(m);
    out.markers.push_back(std::move(marker));
    midpoint[k] = idx;
    return idx;
  };

  for (const auto& t : mesh.triangles) {
    const int m01 = mid_of(t[0], t[1]);
    const int m12 = mid_of(t[1], t[2]);
    const int m20 = mid_of(t[2], t[0]);
    for (const auto& tv : {std::array<int, 3>{t[0], m01, m20},
                           std::array<int, 3>{m01, t[1], m12},
                           std::array<int, 3>{m20, m12, t[2]},
                           std::array<int, 3>{m01, m12, m20}}) {
      if (cross(out.vertices[tv[1]] - out.vertices[tv[0]],
                out.vertices[tv[2]] - out.vertices[tv[0]]) <= 0)
        throw NumericError("refine: boundary projection inverted a child triangle");
      out.triangles.push_back(tv);
    }
  }
  for (const auto& e : mesh.boundary_edges) {
    const int m = mid_of(e.a, e.b);
    out.boundary_edges.push_back({e.a, m, e.arc_id});
    out.boundary_edges.push_back({m, e.b, e.arc_id});
  }
  std::sort(out.boundary_edges.begin(), out.boundary_edges.end(),
            [](const BoundaryEdge& x, const BoundaryEdge& y) {
              return std::tie(x.a, x.b) < std::tie(y.a, y.b);
            });
  return out;
}

// ---------------------------------------------------------------------------
// jsmesh text format: bit-exact round trip
// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string marker_token(const VertexMarker& m) {
  switch (m.kind) {
    case VertexMarkerKind::interior: return "-";
    case VertexMarkerKind::domain_vertex: return "v";
    case VertexMarkerKind::on_arc: return m.arc_id;
  }
  return "-";
}

}  // namespace

void write_jsmesh(const TriMesh& mesh, std::ostream& out) {
  out << "jsmesh 1\n";
  out << "V " << mesh.vertices.size() << "\n";
  for (size_t i = 0; i < mesh.vertices.size(); ++i)
    out << fmt_double(mesh.vertices[i].x) << " " << fmt_double(mesh.vertices[i].y) << " "
        << marker_token(mesh.markers[i]) << "\n";
  out << "T " << mesh.triangles.size() << "\n";
  for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "E " << mesh.boundary_edges.size() << "\n";
  for (const auto& e : mesh.boundary_edges) out << e.a << " " << e.b << " " << e.arc_id << "\n";
}

void write_jsmesh_file(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  write_jsmesh(mesh, out);
}

TriMesh read_jsmesh(std::istream& in) {
  std::string header, version;
  in >> header >> version;
  if (header != "jsmesh" || version != "1")
    throw ParseError("jsmesh: bad header (expected \"jsmesh 1\")");
  TriMesh mesh;
  std::string tag;
  size_t count = 0;
  in >> tag >> count;
  if (tag != "V") throw ParseError("jsmesh: expected V section");
  mesh.vertices.resize(count);
  mesh.markers.resize(count);
  for (size_t i = 0; i < count; ++i) {
    std::string token;
    in >> mesh.vertices[i].x >> mesh.vertices[i].y >> token;
    if (token == "-") mesh.markers[i].kind = VertexMarkerKind::interior;
    else if (token == "v") mesh.markers[i].kind = VertexMarkerKind::domain_vertex;
    else {
      mesh.markers[i].kind = VertexMarkerKind::on_arc;
      mesh.markers[i].arc_id = token;
    }
  }
  in >> tag >> count;
  if (tag != "T") throw ParseError("jsmesh: expected T section");
  mesh.triangles.resize(count);
  for (auto& t : mesh.triangles) in >> t[0] >> t[1] >> t[2];
  in >> tag >> count;
  if (tag != "E") throw ParseError("jsmesh: expected E section");
  mesh.boundary_edges.resize(count);
  for (auto& e : mesh.boundary_edges) in >> e.a >> e.b >> e.arc_id;
  if (!in) throw ParseError("jsmesh: truncated file");
  return mesh;
}

TriMesh read_jsmesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path);
  return read_jsmesh(in);
}

}  // namespace jsgraph
