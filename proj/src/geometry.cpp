#include "jsgraph/geometry.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "jsgraph/errors.hpp"

namespace jsgraph {

double polygon_signed_area(std::span<const Vec2> poly) {
  double twice = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    twice += cross(a, b);
  }
  return 0.5 * twice;
}

double polyline_euclid_length(std::span<const Vec2> pts) {
  double len = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) len += dist(pts[i], pts[i + 1]);
  return len;
}

int winding_number(std::span<const Vec2> poly, Vec2 p) {
  int wn = 0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    if (a.y <= p.y) {
      if (b.y > p.y && cross(b - a, p - a) > 0) ++wn;
    } else {
      if (b.y <= p.y && cross(b - a, p - a) < 0) --wn;
    }
  }
  return wn;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double l2 = norm2(ab);
  if (l2 == 0.0) return dist(p, a);
  double t = dot(p - a, ab) / l2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + ab * t);
}

double point_polygon_distance(std::span<const Vec2> poly, Vec2 p, bool closed) {
  double d = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  const size_t last = closed ? n : n - 1;
  for (size_t i = 0; i < last; ++i)
    d = std::min(d, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
  return d;
}

double point_polyline_distance(std::span<const Vec2> pts, Vec2 p) {
  return point_polygon_distance(pts, p, /*closed=*/false);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double eps) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return true;
  auto on_segment = [eps](Vec2 p, Vec2 q, Vec2 r) {
    if (std::abs(cross(q - p, r - p)) > eps) return false;
    return r.x >= std::min(p.x, q.x) - eps && r.x <= std::max(p.x, q.x) + eps &&
           r.y >= std::min(p.y, q.y) - eps && r.y <= std::max(p.y, q.y) + eps;
  };
  if (std::abs(d1) <= eps && on_segment(a, b, c)) return true;
  if (std::abs(d2) <= eps && on_segment(a, b, d)) return true;
  if (std::abs(d3) <= eps && on_segment(c, d, a)) return true;
  if (std::abs(d4) <= eps && on_segment(c, d, b)) return true;
  return false;
}

bool polygon_is_simple(std::span<const Vec2> poly, double eps) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i)
    if (dist(poly[i], poly[(i + 1) % n]) <= eps) return false;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      // skip edges sharing an endpoint
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n], eps))
        return false;
    }
  }
  return true;
}

bool point_in_closed_polygon(std::span<const Vec2> poly, Vec2 p, double tol) {
  if (winding_number(poly, p) != 0) return true;
  return point_polygon_distance(poly, p) <= tol;
}

double circumcircle_curvature(Vec2 p0, Vec2 p1, Vec2 p2) {
  const Vec2 u = p1 - p0;
  const Vec2 v = p2 - p1;
  const Vec2 w = p2 - p0;
  const double lu = norm(u), lv = norm(v), lw = norm(w);
  if (lu == 0.0 || lv == 0.0)
    throw DegenerateInputError("circumcircle_curvature: coincident consecutive points");
  if (lw == 0.0)
    throw DegenerateInputError("circumcircle_curvature: closed triple (p0 == p2)");
  return 2.0 * cross(u, v) / (lu * lv * lw);
}

std::vector<std::array<int, 3>> ear_clip(std::span<const Vec2> poly) {
  const int n = static_cast<int>(poly.size());
  if (n < 3) throw DegenerateInputError("ear_clip: fewer than 3 vertices");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (polygon_signed_area(poly) < 0) std::reverse(idx.begin(), idx.end());

  auto is_convex = [&](int a, int b, int c) {
    return cross(poly[b] - poly[a], poly[c] - poly[b]) > 0;
  };
  auto in_triangle = [&](Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
    const double c1 = cross(b - a, p - a);
    const double c2 = cross(c - b, p - b);
    const double c3 = cross(a - c, p - c);
    return c1 >= 0 && c2 >= 0 && c3 >= 0;
  };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(n - 2);
  int guard = 0;
  while (idx.size() > 3) {
    const int m = static_cast<int>(idx.size());
    bool clipped = false;
    for (int i = 0; i < m; ++i) {
      const int ia = idx[(i + m - 1) % m], ib = idx[i], ic = idx[(i + 1) % m];
      if (!is_convex(ia, ib, ic)) continue;
      bool ear = true;
      for (int j = 0; j < m; ++j) {
        const int iq = idx[j];
        if (iq == ia || iq == ib || iq == ic) continue;
        if (in_triangle(poly[iq], poly[ia], poly[ib], poly[ic])) { ear = false; break; }
      }
      if (!ear) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped && ++guard > n)
      throw DegenerateInputError("ear_clip: polygon is not simple");
    if (!clipped) {
      // tolerate near-collinear chains: drop the flattest vertex
      int best = 0;
      double flattest = std::numeric_limits<double>::infinity();
      const int m2 = static_cast<int>(idx.size());
      for (int i = 0; i < m2; ++i) {
        const double a = std::abs(cross(poly[idx[i]] - poly[idx[(i + m2 - 1) % m2]],
                                        poly[idx[(i + 1) % m2]] - poly[idx[i]]));
        if (a < flattest) { flattest = a; best = i; }
      }
      tris.push_back({idx[(best + m2 - 1) % m2], idx[best], idx[(best + 1) % m2]});
      idx.erase(idx.begin() + best);
    }
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

namespace {

bool in_disk(Vec2 p, const Disk& d, double eps) {
  return dist(p, d.center) <= d.radius + eps;
}

Disk disk_from_2(Vec2 a, Vec2 b) {
  const Vec2 c = (a + b) * 0.5;
  return {c, dist(a, b) * 0.5};
}

Disk disk_from_3(Vec2 a, Vec2 b, Vec2 c) {
  const double d = 2.0 * cross(b - a, c - a);
  if (d == 0.0) {
    // collinear: take the extremal pair
    Disk best = disk_from_2(a, b);
    for (const Disk& cand : {disk_from_2(a, c), disk_from_2(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  const double la = norm2(a), lb = norm2(b), lc = norm2(c);
  const Vec2 center{(la * (b.y - c.y) + lb * (c.y - a.y) + lc * (a.y - b.y)) / d,
                    (la * (c.x - b.x) + lb * (a.x - c.x) + lc * (b.x - a.x)) / d};
  return {center, dist(center, a)};
}

}  // namespace

// Welzl's incremental algorithm, iterative form (expected O(n) after shuffle)
Disk smallest_enclosing_disk(std::span<const Vec2> pts) {
  if (pts.empty()) return {{0, 0}, 0};
  if (pts.size() == 1) return {pts[0], 0};
  std::vector<Vec2> p(pts.begin(), pts.end());
  std::mt19937 rng(0x5eedu);  // fixed seed: result is deterministic
  std::shuffle(p.begin(), p.end(), rng);

  constexpr double kEps = 1e-12;
  Disk d = disk_from_2(p[0], p[1]);
  for (size_t i = 2; i < p.size(); ++i) {
    if (in_disk(p[i], d, kEps)) continue;
    // p[i] on the boundary
    d = disk_from_2(p[0], p[i]);
    for (size_t j = 1; j < i; ++j) {
      if (in_disk(p[j], d, kEps)) continue;
      // p[i], p[j] on the boundary
      d = disk_from_2(p[i], p[j]);
      for (size_t k = 0; k < j; ++k) {
        if (in_disk(p[k], d, kEps)) continue;
        d = disk_from_3(p[i], p[j], p[k]);
      }
    }
  }
  return d;
}

}  // namespace jsgraph
