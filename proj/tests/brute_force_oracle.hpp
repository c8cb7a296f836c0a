// Independent brute-force enumeration oracle for straight-sided Euclidean
// domains: subsets of domain vertices in cyclic order, naive lengths, shoelace
// areas, dense chord sampling for containment. Deliberately shares no code
// with the library's enumerator beyond basic Vec2 arithmetic.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "jsgraph/domain.hpp"

namespace oracle {

struct Record {
  std::vector<int> verts;
  bool whole = false;
  double alpha = 0, beta = 0, ell = 0, area = 0;
};

inline double seg_len(jsgraph::Vec2 a, jsgraph::Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  return std::sqrt(dx * dx + dy * dy);
}

// winding-number point-in-polygon on the raw vertex polygon
inline bool inside(const std::vector<jsgraph::Vec2>& poly, jsgraph::Vec2 p, double tol) {
  int wn = 0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const auto a = poly[i], b = poly[(i + 1) % n];
    const double c = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (a.y <= p.y && b.y > p.y && c > 0) ++wn;
    if (a.y > p.y && b.y <= p.y && c < 0) --wn;
  }
  if (wn != 0) return true;
  // near-boundary tolerance
  double dmin = 1e300;
  for (size_t i = 0; i < n; ++i) {
    const auto a = poly[i], b = poly[(i + 1) % n];
    const double l2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    double t = l2 == 0 ? 0 : ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / l2;
    t = std::clamp(t, 0.0, 1.0);
    dmin = std::min(dmin, seg_len(p, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}));
  }
  return dmin <= tol;
}

inline bool simple_polygon(const std::vector<jsgraph::Vec2>& poly) {
  const size_t n = poly.size();
  auto intersect = [](jsgraph::Vec2 a, jsgraph::Vec2 b, jsgraph::Vec2 c, jsgraph::Vec2 d) {
    auto cr = [](jsgraph::Vec2 u, jsgraph::Vec2 v) { return u.x * v.y - u.y * v.x; };
    const double d1 = cr({b.x - a.x, b.y - a.y}, {c.x - a.x, c.y - a.y});
    const double d2 = cr({b.x - a.x, b.y - a.y}, {d.x - a.x, d.y - a.y});
    const double d3 = cr({d.x - c.x, d.y - c.y}, {a.x - c.x, a.y - c.y});
    const double d4 = cr({d.x - c.x, d.y - c.y}, {b.x - c.x, b.y - c.y});
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  return true;
}

// all arcs must be straight segments
inline std::vector<Record> enumerate_straight(const jsgraph::DomainSpec& spec) {
  using jsgraph::ArcKind;
  const auto verts = spec.vertices();
  const int n = static_cast<int>(verts.size());
  double scale = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, seg_len(verts[i], verts[j]));
  const double tol = 1e-9 * scale;

  std::vector<Record> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> sel;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sel.push_back(i);
    if (sel.size() < 3) continue;
    const int k = static_cast<int>(sel.size());
    std::vector<jsgraph::Vec2> poly;
    for (int i : sel) poly.push_back(verts[i]);
    if (!simple_polygon(poly)) continue;

    // containment: sample every chord densely against the vertex polygon
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      const auto a = poly[i], b = poly[(i + 1) % k];
      for (int s = 0; s <= 200 && ok; ++s) {
        const double t = s / 200.0;
        ok = inside(verts, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, tol);
      }
    }
    if (!ok) continue;

    Record rec;
    rec.verts = sel;
    rec.whole = k == n;
    for (int i = 0; i < k; ++i) {
      const int va = sel[i], vb = sel[(i + 1) % k];
      const double len = seg_len(verts[va], verts[vb]);
      rec.ell += len;
      if (vb == (va + 1) % n) {  // lies along the boundary arc va
        if (spec.arcs[va].kind == ArcKind::A) rec.alpha += len;
        if (spec.arcs[va].kind == ArcKind::B) rec.beta += len;
      }
      rec.area += 0.5 * (verts[va].x * verts[vb].y - verts[va].y * verts[vb].x);
    }
    rec.area = std::abs(rec.area);
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(), [](const Record& a, const Record& b) {
    if (a.whole != b.whole) return a.whole;
    if (a.verts.size() != b.verts.size()) return a.verts.size() < b.verts.size();
    return a.verts < b.verts;
  });
  return out;
}

}  // namespace oracle
