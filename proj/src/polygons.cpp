#include "jsgraph/polygons.hpp"

#include <algorithm>
#include <cmath>

#include "jsgraph/errors.hpp"

namespace jsgraph {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_pi(double a) {
  while (a > M_PI) a -= kTwoPi;
  while (a <= -M_PI) a += kTwoPi;
  return a;
}

// geodesic ODE for the conformal metric: x'' = -2 (grad phi . x') x' + |x'|^2 grad phi,
// phi = ln lambda
struct GeodesicState {
  Vec2 x, v;
};

GeodesicState geodesic_rhs(const ConformalMetric& m, const GeodesicState& s) {
  const Vec2 g = m.dlog_lambda(s.x);
  return {s.v, g * norm2(s.v) - s.v * (2.0 * dot(g, s.v))};
}

// integrate from a with initial direction theta over parameter length T
std::optional<std::vector<Vec2>> shoot(const ConformalMetric& m, Vec2 a, double theta,
                                       double T, int steps) {
  GeodesicState s{a, {std::cos(theta), std::sin(theta)}};
  std::vector<Vec2> path{a};
  const double dt = T / steps;
  for (int i = 0; i < steps; ++i) {
    const auto k1 = geodesic_rhs(m, s);
    const auto k2 = geodesic_rhs(m, {s.x + k1.x * (dt / 2), s.v + k1.v * (dt / 2)});
    const auto k3 = geodesic_rhs(m, {s.x + k2.x * (dt / 2), s.v + k2.v * (dt / 2)});
    const auto k4 = geodesic_rhs(m, {s.x + k3.x * dt, s.v + k3.v * dt});
    s.x += (k1.x + 2 * k2.x + 2 * k3.x + k4.x) * (dt / 6);
    s.v += (k1.v + 2 * k2.v + 2 * k3.v + k4.v) * (dt / 6);
    if (!m.contains(s.x) || !std::isfinite(s.x.x) || !std::isfinite(s.x.y))
      return std::nullopt;
    path.push_back(s.x);
  }
  return path;
}

}  // namespace

std::optional<std::vector<Vec2>> two_point_geodesic(const ConformalMetric& metric, Vec2 a,
                                                    Vec2 b, int points, int max_iter) {
  if (metric.is_euclidean()) {
    std::vector<Vec2> line;
    for (int i = 0; i < points; ++i)
      line.push_back(lerp(a, b, static_cast<double>(i) / (points - 1)));
    return line;
  }
  // shooting on (theta, T): Newton with finite-difference Jacobian
  const int steps = std::max(64, points - 1);
  double theta = std::atan2(b.y - a.y, b.x - a.x);
  double T = dist(a, b);
  const double scale = std::max(T, 1e-12);

  auto endpoint = [&](double th, double len) -> std::optional<Vec2> {
    auto path = shoot(metric, a, th, len, steps);
    if (!path) return std::nullopt;
    return path->back();
  };

  const int newton_cap = std::min(max_iter, 60);
  for (int it = 0; it < newton_cap; ++it) {
    const auto end = endpoint(theta, T);
    if (!end) return std::nullopt;
    const Vec2 f = *end - b;
    if (norm(f) < 1e-12 * scale) break;
    const double dth = 1e-7, dT = 1e-7 * scale;
    const auto e1 = endpoint(theta + dth, T);
    const auto e2 = endpoint(theta, T + dT);
    if (!e1 || !e2) return std::nullopt;
    const Vec2 c1 = (*e1 - *end) / dth;    // d end / d theta
    const Vec2 c2 = (*e2 - *end) / dT;     // d end / d T
    const double det = c1.x * c2.y - c1.y * c2.x;
    if (std::abs(det) < 1e-30) return std::nullopt;
    const double dtheta = (-f.x * c2.y + f.y * c2.x) / det;
    const double dlen = (-c1.x * f.y + c1.y * f.x) / det;
    // damped update
    double damp = 1.0;
    for (int bt = 0; bt < 30; ++bt) {
      const auto trial = endpoint(theta + damp * dtheta, T + damp * dlen);
      if (trial && norm(*trial - b) < norm(f)) break;
      damp *= 0.5;
    }
    theta += damp * dtheta;
    T += damp * dlen;
    if (!(T > 0)) return std::nullopt;
  }
  {
    const auto last = endpoint(theta, T);
    if (!last || norm(*last - b) > 1e-9 * scale) return std::nullopt;  // did not converge
  }

  auto path = shoot(metric, a, theta, T, points - 1);
  if (!path) return std::nullopt;
  path->back() = b;  // pin the endpoint
  return path;
}

namespace {

std::vector<Vec2> segment_polyline(Vec2 a, Vec2 b, int n) {
  std::vector<Vec2> pts;
  for (int i = 0; i <= n; ++i) pts.push_back(lerp(a, b, static_cast<double>(i) / n));
  return pts;
}

double polyline_green_term(std::span<const Vec2> pts) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) s += 0.5 * cross(pts[i], pts[i + 1]);
  return s;
}

// exact integral of (x dy - y dx)/2 along a circular arc
double circular_green_term(Vec2 c, double r, double a0, double sweep) {
  const double a1 = a0 + sweep;
  return 0.5 * (r * r * sweep + c.x * r * (std::sin(a1) - std::sin(a0)) -
                c.y * r * (std::cos(a1) - std::cos(a0)));
}

double arc_green_term(const ArcGeometry& g) {
  if (const auto* s = std::get_if<SegmentGeom>(&g.raw())) return 0.5 * cross(s->p, s->q);
  if (const auto* c = std::get_if<CircularArcGeom>(&g.raw()))
    return circular_green_term(c->center, c->radius, c->from_angle, c->sweep());
  return polyline_green_term(std::get<SampledGeom>(g.raw()).points);
}

// does the boundary arc coincide with the straight chord of its endpoints?
bool chord_matches_arc(const Arc& arc, double tol) {
  for (int s = 1; s < 8; ++s) {
    const Vec2 q = arc.geometry.point(s / 8.0);
    if (point_segment_distance(q, arc.geometry.start(), arc.geometry.end()) > tol)
      return false;
  }
  return true;
}

// is the boundary arc a sigma-geodesic?
bool arc_is_geodesic(const Arc& arc, const ConformalMetric& m, double slack) {
  for (int s = 1; s < 16; ++s) {
    if (std::abs(arc.sigma_curvature_left(m, s / 16.0)) > slack) return false;
  }
  return true;
}

double arc_sigma_length(const Arc& arc, const ConformalMetric& metric) {
  if (std::holds_alternative<SampledGeom>(arc.geometry.raw()))
    return metric_length(std::get<SampledGeom>(arc.geometry.raw()).points, metric);
  if (metric.is_euclidean()) return arc.geometry.euclid_length();
  return metric_length_param([&](double t) { return arc.geometry.point(t); },
                             [&](double t) { return arc.geometry.velocity(t); }, 0.0, 1.0,
                             metric, 64);
}

PolygonSide make_boundary_side(const DomainSpec& spec, int arc_index, int vfrom, int vto,
                               int samples) {
  PolygonSide s;
  s.type = PolygonSide::Type::boundary_arc;
  s.on_arcs = {arc_index};
  s.from_vertex = vfrom;
  s.to_vertex = vto;
  s.polyline = spec.arcs[arc_index].geometry.polyline(samples);
  s.sigma_length = arc_sigma_length(spec.arcs[arc_index], spec.metric);
  s.green_term = arc_green_term(spec.arcs[arc_index].geometry);
  return s;
}

// does the side lie along the whole boundary chain from va to vb? if so the
// covered arcs are attributed to it (alpha/beta count them, exact lengths)
void attribute_boundary_run(const DomainSpec& spec, PolygonSide& side, double tol) {
  const int n = static_cast<int>(spec.arcs.size());
  std::vector<int> run;
  for (int k = side.from_vertex; k != side.to_vertex; k = (k + 1) % n) {
    const Arc& arc = spec.arcs[k];
    for (int s = 1; s < 8; ++s) {
      const Vec2 q = arc.geometry.point(s / 8.0);
      if (point_polyline_distance(side.polyline, q) > tol) return;  // leaves the side
    }
    run.push_back(k);
    if (static_cast<int>(run.size()) > n) return;
  }
  if (run.empty()) return;
  side.on_arcs = run;
  double len = 0.0, green = 0.0;
  for (const int k : run) {
    len += arc_sigma_length(spec.arcs[k], spec.metric);
    green += arc_green_term(spec.arcs[k].geometry);
  }
  side.sigma_length = len;
  side.green_term = green;
}

// the two minor arcs of curvature H joining a -> b; empty when |ab| > 2/H
std::vector<PolygonSide> cmc_side_candidates(Vec2 a, Vec2 b, double H, int samples,
                                             double tol) {
  std::vector<PolygonSide> out;
  const double r = 1.0 / H;
  const double d = dist(a, b);
  if (d > 2.0 * r + tol || d <= tol) return out;
  const double off2 = std::max(0.0, r * r - 0.25 * d * d);
  const double off = std::sqrt(off2);
  const Vec2 mid = (a + b) * 0.5;
  const Vec2 left = normalized(perp(b - a));
  for (const bool bulge_left : {false, true}) {
    // the arc bulges away from its center
    const Vec2 center = bulge_left ? mid - left * off : mid + left * off;
    const double a0 = std::atan2(a.y - center.y, a.x - center.x);
    const double a1 = std::atan2(b.y - center.y, b.x - center.x);
    double sweep = wrap_pi(a1 - a0);
    // half circles (|ab| = 2r): the ccw arc bulges right of a->b
    if (std::abs(std::abs(sweep) - M_PI) < 1e-9) sweep = bulge_left ? -M_PI : M_PI;
    PolygonSide s;
    s.type = PolygonSide::Type::cmc_arc;
    s.bulge_left = bulge_left;
    s.sigma_length = r * std::abs(sweep);
    s.green_term = circular_green_term(center, r, a0, sweep);
    for (int i = 0; i <= samples; ++i) {
      const double t = a0 + sweep * i / samples;
      s.polyline.push_back({center.x + r * std::cos(t), center.y + r * std::sin(t)});
    }
    out.push_back(std::move(s));
  }
  return out;
}

// does this cmc side candidate coincide with the single boundary arc?
bool cmc_side_matches_arc(const PolygonSide& s, const Arc& arc, double tol) {
  const auto* c = std::get_if<CircularArcGeom>(&arc.geometry.raw());
  if (!c) return false;
  // compare midpoints
  const Vec2 arc_mid = arc.geometry.point(0.5);
  const Vec2 side_mid = s.polyline[s.polyline.size() / 2];
  return dist(arc_mid, side_mid) <= tol;
}

bool polygon_sides_simple(const AdmissiblePolygon& poly, double eps) {
  // coarse chain: subsample each side, then run the standard simplicity test
  std::vector<Vec2> chain;
  for (const auto& s : poly.sides) {
    const size_t n = s.polyline.size();
    const size_t step = std::max<size_t>(1, n / 12);
    for (size_t i = 0; i + 1 < n; i += step) chain.push_back(s.polyline[i]);
    // ensure the corner itself is present
  }
  if (chain.size() < 3) return false;
  return polygon_is_simple(chain, eps);
}

}  // namespace

std::vector<AdmissiblePolygon> enumerate_admissible_polygons(const DomainSpec& spec,
                                                             CheckMode mode, double H,
                                                             const EnumerateOptions& opt) {
  const auto verts = spec.vertices();
  const int n = static_cast<int>(verts.size());
  if (n > opt.vertex_cap)
    throw UnsupportedError("polygon enumeration refused: " + std::to_string(n) +
                           " vertices exceeds the cap of " + std::to_string(opt.vertex_cap));
  if (mode == CheckMode::cmc && !spec.metric.is_euclidean())
    throw UnsupportedError("CMC admissible polygons are defined for the euclidean metric");
  if (mode == CheckMode::cmc && !(H > 0.0))
    throw UnsupportedError("CMC mode needs H > 0");

  const double scale = spec.diameter();
  const double tol = 1e-9 * scale;

  // containment reference polygon; tolerance covers its chordal sagitta
  std::vector<Vec2> ref = spec.boundary_polyline(256);
  double sagitta = 0.0;
  for (const auto& arc : spec.arcs) {
    if (const auto* c = std::get_if<CircularArcGeom>(&arc.geometry.raw())) {
      const double step = c->radius * std::abs(c->sweep()) / 256.0;
      sagitta = std::max(sagitta, step * step / (8.0 * c->radius));
    }
  }
  const double contain_tol = std::max(opt.containment_tol_rel * scale, 2.0 * sagitta);
  auto contained = [&](const AdmissiblePolygon& poly) {
    for (const auto& s : poly.sides)
      for (const auto& p : s.polyline)
        if (!point_in_closed_polygon(ref, p, contain_tol)) return false;
    return true;
  };

  const int side_samples = std::max(opt.min_side_samples,
                                    static_cast<int>(opt.samples_per_unit * scale / 4));

  std::vector<AdmissiblePolygon> out;

  // the whole boundary
  {
    AdmissiblePolygon whole;
    whole.id = "boundary";
    whole.is_whole_boundary = true;
    for (int i = 0; i < n; ++i) {
      whole.vertex_indices.push_back(i);
      whole.sides.push_back(make_boundary_side(spec, i, i, (i + 1) % n, side_samples));
    }
    out.push_back(std::move(whole));
  }

  // candidate vertex pool
  std::vector<int> pool;
  for (int i = 0; i < n; ++i) {
    if (mode == CheckMode::cmc) {
      const ArcKind after = spec.arcs[i].kind;                    // arc starting at vertex i
      const ArcKind before = spec.arcs[(i + n - 1) % n].kind;     // arc ending at vertex i
      if (after == ArcKind::A || after == ArcKind::B || before == ArcKind::A ||
          before == ArcKind::B)
        pool.push_back(i);
    } else {
      pool.push_back(i);
    }
  }

  const int m = static_cast<int>(pool.size());
  const int min_size = mode == CheckMode::cmc ? 2 : 3;
  const bool conformal = !spec.metric.is_euclidean();

  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> sel;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) sel.push_back(pool[i]);
    if (static_cast<int>(sel.size()) < min_size) continue;

    if (mode != CheckMode::cmc) {
      AdmissiblePolygon poly;
      poly.vertex_indices = sel;
      const int k = static_cast<int>(sel.size());
      bool all_boundary = true;
      for (int i = 0; i < k; ++i) {
        const int va = sel[i], vb = sel[(i + 1) % k];
        PolygonSide side;
        side.from_vertex = va;
        side.to_vertex = vb;
        const bool consecutive = vb == (va + 1) % n;
        if (consecutive) {
          const Arc& arc = spec.arcs[va];
          const bool matches = conformal ? arc_is_geodesic(arc, spec.metric, 1e-6)
                                         : chord_matches_arc(arc, tol);
          if (matches) {
            poly.sides.push_back(make_boundary_side(spec, va, va, vb, side_samples));
            continue;
          }
        }
        all_boundary = false;
        if (!conformal) {
          side.type = PolygonSide::Type::chord;
          side.polyline = segment_polyline(verts[va], verts[vb], side_samples);
          side.sigma_length = dist(verts[va], verts[vb]);
          side.green_term = 0.5 * cross(verts[va], verts[vb]);
          attribute_boundary_run(spec, side, 64.0 * tol);
        } else {
          auto geo = two_point_geodesic(spec.metric, verts[va], verts[vb],
                                        opt.geodesic_points, opt.geodesic_max_iter);
          side.type = PolygonSide::Type::chord;
          if (!geo) {
            poly.indeterminate = true;
            side.polyline = {verts[va], verts[vb]};
            side.sigma_length = 0.0;
          } else {
            side.polyline = std::move(*geo);
            side.sigma_length = metric_length(side.polyline, spec.metric);
            side.green_term = polyline_green_term(side.polyline);
            attribute_boundary_run(spec, side, 1e-4 * spec.diameter());
          }
        }
        poly.sides.push_back(std::move(side));
      }
      if (static_cast<int>(sel.size()) == n && all_boundary) continue;  // duplicates boundary
      if (!poly.indeterminate) {
        if (!polygon_sides_simple(poly, tol)) continue;
        if (!contained(poly)) continue;
      }
      poly.id = "P";
      for (size_t i = 0; i < sel.size(); ++i)
        poly.id += (i ? "-" : "") + std::to_string(sel[i]);
      out.push_back(std::move(poly));
    } else {
      // CMC: every side is one of two minor arcs of curvature H
      const int k = static_cast<int>(sel.size());
      std::vector<std::vector<PolygonSide>> options(k);
      bool feasible = true;
      for (int i = 0; i < k && feasible; ++i) {
        const int va = sel[i], vb = sel[(i + 1) % k];
        auto cands = cmc_side_candidates(verts[va], verts[vb], H, side_samples, tol);
        // a biangle is one geometric lens; fixing the first side's bulge
        // avoids enumerating it in both orientations
        if (k == 2 && i == 0 && cands.size() == 2) cands.resize(1);
        for (auto& c : cands) {
          c.from_vertex = va;
          c.to_vertex = vb;
          const bool consecutive = vb == (va + 1) % n;
          if (consecutive && cmc_side_matches_arc(c, spec.arcs[va], 64.0 * contain_tol)) {
            c.type = PolygonSide::Type::boundary_arc;
            c.on_arcs = {va};
          } else if (!consecutive) {
            attribute_boundary_run(spec, c, 64.0 * contain_tol);
          }
        }
        if (cands.empty()) feasible = false;
        options[i] = std::move(cands);
      }
      if (!feasible) continue;

      size_t combos = 1;
      for (const auto& o : options) combos *= o.size();
      if (out.size() + combos > opt.max_polygons)
        throw UnsupportedError("CMC polygon enumeration exceeded the combinatorial cap");

      for (size_t combo = 0; combo < combos; ++combo) {
        AdmissiblePolygon poly;
        poly.vertex_indices = sel;
        size_t rem = combo;
        std::string pattern;
        for (int i = 0; i < k; ++i) {
          const size_t pick = rem % options[i].size();
          rem /= options[i].size();
          poly.sides.push_back(options[i][pick]);
          pattern += poly.sides.back().bulge_left ? 'L' : 'R';
        }
        bool all_boundary = true;
        for (const auto& s : poly.sides)
          all_boundary = all_boundary && s.type == PolygonSide::Type::boundary_arc;
        if (static_cast<int>(sel.size()) == n && all_boundary) continue;
        if (!polygon_sides_simple(poly, tol)) continue;
        if (!contained(poly)) continue;
        poly.id = "P";
        for (size_t i = 0; i < sel.size(); ++i)
          poly.id += (i ? "-" : "") + std::to_string(sel[i]);
        poly.id += "/" + pattern;
        out.push_back(std::move(poly));
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const AdmissiblePolygon& a, const AdmissiblePolygon& b) {
    if (a.is_whole_boundary != b.is_whole_boundary) return a.is_whole_boundary;
    if (a.vertex_indices.size() != b.vertex_indices.size())
      return a.vertex_indices.size() < b.vertex_indices.size();
    if (a.vertex_indices != b.vertex_indices) return a.vertex_indices < b.vertex_indices;
    return a.id < b.id;
  });
  return out;
}

}  // namespace jsgraph
