#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace jsgraph {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
// sqrt form: exactly homogeneous under power-of-two scaling (used by the
// scaling-invariance contract of the structural checks)
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
// counterclockwise quarter turn
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline Vec2 normalized(Vec2 v) { double n = norm(v); return {v.x / n, v.y / n}; }
inline Vec2 lerp(Vec2 a, Vec2 b, double t) { return a + (b - a) * t; }

struct Triangle2 {
  Vec2 a, b, c;
};

inline double triangle_area(const Triangle2& t) {
  return 0.5 * cross(t.b - t.a, t.c - t.a);  // signed, positive when CCW
}

struct Disk {
  Vec2 center;
  double radius = 0.0;
};

// twice the signed area of the polygon (shoelace); positive when CCW
double polygon_signed_area(std::span<const Vec2> poly);

double polyline_euclid_length(std::span<const Vec2> pts);

// winding number of `poly` (closed, implicit last->first edge) around p
int winding_number(std::span<const Vec2> poly, Vec2 p);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// distance from p to the closed polygonal chain (last->first edge included when closed)
double point_polygon_distance(std::span<const Vec2> poly, Vec2 p, bool closed = true);

// distance from p to the open polyline
double point_polyline_distance(std::span<const Vec2> pts, Vec2 p);

// proper or improper crossing between open segments [a,b] and [c,d]
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double eps = 1e-12);

// closed polygon, no repeated last point; adjacent edges may share endpoints only
bool polygon_is_simple(std::span<const Vec2> poly, double eps = 1e-12);

// inside-or-on test against a closed polygon at absolute boundary tolerance `tol`
bool point_in_closed_polygon(std::span<const Vec2> poly, Vec2 p, double tol);

// signed curvature of the circle through three points; positive for a left turn.
// Collinear points give exactly 0. Throws DegenerateInputError on coincident points.
double circumcircle_curvature(Vec2 p0, Vec2 p1, Vec2 p2);

// triangulate a simple polygon (CCW or CW) by ear clipping; returns index triples
std::vector<std::array<int, 3>> ear_clip(std::span<const Vec2> poly);

// Welzl's algorithm, deterministic (fixed internal shuffle seed)
Disk smallest_enclosing_disk(std::span<const Vec2> pts);

}  // namespace jsgraph
