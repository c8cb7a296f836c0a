// Shared test domains, built through the JSON front door.
#pragma once

#include <cmath>
#include <string>

#include "jsgraph/domain.hpp"

namespace fixtures {

using jsgraph::DomainSpec;

// CCW square with corners (x0,y0)..(x1,y1); kinds/datas order: bottom, right, top, left
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline DomainSpec square(double x0, double y0, double x1, double y1,
                         const std::array<std::string, 4>& kinds,
                         const std::array<std::string, 4>& datas = {"0", "0", "0", "0"},
                         const std::string& name = "square",
                         const std::string& metric = R"({"kind":"euclidean"})") {
  auto seg = [](double ax, double ay, double bx, double by) {
    return R"({"type":"segment","p":[)" + num(ax) + "," + num(ay) + R"(],"q":[)" + num(bx) +
           "," + num(by) + "]}";
  };
  auto arc = [&](int i, const std::string& geom) {
    std::string s = R"({"id":"s)" + std::to_string(i) + R"(","kind":")" + kinds[i] +
                    R"(","geometry":)" + geom;
    if (kinds[i] == "C") s += R"(,"data":")" + datas[i] + "\"";
    return s + "}";
  };
  const std::string text = R"({"name":")" + name + R"(","metric":)" + metric +
                           R"(,"arcs":[)" + arc(0, seg(x0, y0, x1, y0)) + "," +
                           arc(1, seg(x1, y0, x1, y1)) + "," + arc(2, seg(x1, y1, x0, y1)) +
                           "," + arc(3, seg(x0, y1, x0, y0)) + "]}";
  return DomainSpec::from_json_text(text);
}

// Scherk's square (-pi/2,pi/2)^2: u = ln(cos x) - ln(cos y) blows up to +inf at
// y = +-pi/2 (top/bottom = A) and to -inf at x = +-pi/2 (left/right = B).
inline DomainSpec scherk_square() {
  const double h = M_PI / 2;
  return square(-h, -h, h, h, {"A", "B", "A", "B"}, {"", "", "", ""}, "scherk");
}

inline DomainSpec unit_square_a_lr_c_tb() {
  return square(0, 0, 1, 1, {"C", "A", "C", "A"}, {"0", "", "0", ""}, "square-a-lr");
}

inline DomainSpec unit_square_a_left(const std::string& cdata = "0") {
  return square(0, 0, 1, 1, {"C", "C", "C", "A"}, {cdata, cdata, cdata, ""},
                "square-a-left");
}

inline DomainSpec right_triangle_a_hyp() {
  const std::string text = R"({
    "name": "triangle",
    "metric": {"kind": "euclidean"},
    "arcs": [
      {"id":"leg1","kind":"C","geometry":{"type":"segment","p":[0,0],"q":[1,0]},"data":"0"},
      {"id":"hyp","kind":"A","geometry":{"type":"segment","p":[1,0],"q":[0,1]}},
      {"id":"leg2","kind":"C","geometry":{"type":"segment","p":[0,1],"q":[0,0]},"data":"0"}
    ]})";
  return DomainSpec::from_json_text(text);
}

// L-shaped hexagon (0,0)(3,0)(3,1)(1,1)(1,2)(0,2); A on the left side
inline DomainSpec l_hexagon() {
  const double pts[6][2] = {{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 2}, {0, 2}};
  std::string arcs;
  for (int i = 0; i < 6; ++i) {
    const int j = (i + 1) % 6;
    const bool is_a = i == 5;  // the (0,2)->(0,0) side
    arcs += std::string(i ? "," : "") + R"({"id":"e)" + std::to_string(i) +
            R"(","kind":")" + (is_a ? "A" : "C") + R"(","geometry":{"type":"segment","p":[)" +
            num(pts[i][0]) + "," + num(pts[i][1]) + R"(],"q":[)" + num(pts[j][0]) + "," +
            num(pts[j][1]) + "]}" + (is_a ? "" : R"(,"data":"0")") + "}";
  }
  return DomainSpec::from_json_text(R"({"name":"l-hexagon","metric":{"kind":"euclidean"},"arcs":[)" +
                                    arcs + "]}");
}

// Spruck lens with H = 1: two unit arcs through (+-sin t, 0), upper kind A,
// lower kind C, both curving toward the interior.
inline DomainSpec lens(double t = M_PI / 3, double upper_radius = 1.0) {
  const double s = std::sin(t), c = std::cos(t);
  // upper arc: center (0, -k) with k = sqrt(r^2 - s^2); spans the top
  const double k = std::sqrt(upper_radius * upper_radius - s * s);
  const double a0 = std::atan2(k, s);  // angle of the right vertex seen from the center
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                R"({"name":"lens","metric":{"kind":"euclidean"},"arcs":[
      {"id":"up","kind":"A","geometry":{"type":"circular_arc","center":[0,%.17g],"radius":%.17g,
        "from_angle":%.17g,"to_angle":%.17g,"ccw":true}},
      {"id":"down","kind":"C","geometry":{"type":"circular_arc","center":[0,%.17g],"radius":1.0,
        "from_angle":%.17g,"to_angle":%.17g,"ccw":true},"data":"0"}
    ]})",
                -k, upper_radius, a0, M_PI - a0, c, M_PI + (M_PI / 2 - t),
                2 * M_PI - (M_PI / 2 - t));
  return DomainSpec::from_json_text(buf);
}

// Disk of radius 2 with a circular dent of radius 1 whose inner arc has length
// exactly pi: the strict bound |B| < pi/H fails at equality for H = 1.
inline DomainSpec dented_disk() {
  const double r3 = std::sqrt(3.0);
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                R"({"name":"dented-disk","metric":{"kind":"euclidean"},"arcs":[
      {"id":"dent","kind":"B","geometry":{"type":"circular_arc","center":[0,%.17g],"radius":1.0,
        "from_angle":0.0,"to_angle":%.17g,"ccw":false}},
      {"id":"rim","kind":"C","geometry":{"type":"circular_arc","center":[0,0],"radius":2.0,
        "from_angle":%.17g,"to_angle":%.17g,"ccw":true},"data":"0"}
    ]})",
                r3, -M_PI, 2 * M_PI / 3, M_PI / 3);
  return DomainSpec::from_json_text(buf);
}

// Equilateral hyperbolic geodesic triangle in the unit Poincare disk,
// vertices at Euclidean radius a; sides are circular arcs orthogonal to the
// unit circle. Kinds: A, B, C.
inline DomainSpec hyperbolic_triangle(double a = 0.6) {
  using jsgraph::Vec2;
  Vec2 v[3];
  for (int k = 0; k < 3; ++k) {
    const double ang = M_PI / 2 + 2.0 * M_PI * k / 3.0;
    v[k] = {a * std::cos(ang), a * std::sin(ang)};
  }
  std::string arcs;
  const char* kinds[3] = {"A", "B", "C"};
  for (int k = 0; k < 3; ++k) {
    const Vec2 z1 = v[k], z2 = v[(k + 1) % 3];
    // center of the orthogonal circle: 2 c . z = a^2 + 1 for both endpoints
    const double rhs = (a * a + 1.0) / 2.0;
    const double det = z1.x * z2.y - z1.y * z2.x;
    const Vec2 c{(rhs * z2.y - rhs * z1.y) / det, (rhs * z1.x - rhs * z2.x) / det};
    const double r = std::sqrt(c.x * c.x + c.y * c.y - 1.0);
    const double a0 = std::atan2(z1.y - c.y, z1.x - c.x);
    double sweep = std::atan2(z2.y - c.y, z2.x - c.x) - a0;
    while (sweep > M_PI) sweep -= 2 * M_PI;
    while (sweep <= -M_PI) sweep += 2 * M_PI;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  R"({"id":"g%d","kind":"%s","geometry":{"type":"circular_arc",
        "center":[%.17g,%.17g],"radius":%.17g,"from_angle":%.17g,"to_angle":%.17g,
        "ccw":%s}%s})",
                  k, kinds[k], c.x, c.y, r, a0, a0 + sweep, sweep > 0 ? "true" : "false",
                  k == 2 ? R"(,"data":"0")" : "");
    arcs += std::string(k ? "," : "") + buf;
  }
  return DomainSpec::from_json_text(
      R"({"name":"hyp-triangle","metric":{"kind":"poincare_disk","radius":1.0},"arcs":[)" +
      arcs + "]}");
}

// Geodesic square in the unit Poincare disk, vertices at Euclidean radius a
// on the axes; kinds alternate A, B, A, B.
inline DomainSpec hyperbolic_square(double a = 0.6) {
  using jsgraph::Vec2;
  Vec2 v[4];
  for (int k = 0; k < 4; ++k) {
    const double ang = M_PI / 2 * k;
    v[k] = {a * std::cos(ang), a * std::sin(ang)};
  }
  std::string arcs;
  const char* kinds[4] = {"A", "B", "A", "B"};
  for (int k = 0; k < 4; ++k) {
    const Vec2 z1 = v[k], z2 = v[(k + 1) % 4];
    const double rhs = (a * a + 1.0) / 2.0;
    const double det = z1.x * z2.y - z1.y * z2.x;
    const Vec2 c{(rhs * z2.y - rhs * z1.y) / det, (rhs * z1.x - rhs * z2.x) / det};
    const double r = std::sqrt(c.x * c.x + c.y * c.y - 1.0);
    const double a0 = std::atan2(z1.y - c.y, z1.x - c.x);
    double sweep = std::atan2(z2.y - c.y, z2.x - c.x) - a0;
    while (sweep > M_PI) sweep -= 2 * M_PI;
    while (sweep <= -M_PI) sweep += 2 * M_PI;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  R"({"id":"g%d","kind":"%s","geometry":{"type":"circular_arc",
        "center":[%.17g,%.17g],"radius":%.17g,"from_angle":%.17g,"to_angle":%.17g,
        "ccw":%s}})",
                  k, kinds[k], c.x, c.y, r, a0, a0 + sweep, sweep > 0 ? "true" : "false");
    arcs += std::string(k ? "," : "") + buf;
  }
  return DomainSpec::from_json_text(
      R"({"name":"hyp-square","metric":{"kind":"poincare_disk","radius":1.0},"arcs":[)" +
      arcs + "]}");
}

inline double hyperbolic_distance(jsgraph::Vec2 z, jsgraph::Vec2 w) {
  const double num = std::hypot(z.x - w.x, z.y - w.y);
  const double den = std::hypot(1.0 - z.x * w.x - z.y * w.y, z.x * w.y - z.y * w.x);
  return 2.0 * std::atanh(num / den);
}

}  // namespace fixtures
