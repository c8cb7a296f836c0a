#include "jsgraph/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jsgraph/errors.hpp"

namespace jsgraph {

using ordered_json = nlohmann::ordered_json;

std::string to_string(ArcKind k) {
  switch (k) {
    case ArcKind::A: return "A";
    case ArcKind::B: return "B";
    case ArcKind::C: return "C";
  }
  return "?";
}

ArcKind arc_kind_from_string(const std::string& s) {
  if (s == "A") return ArcKind::A;
  if (s == "B") return ArcKind::B;
  if (s == "C") return ArcKind::C;
  throw ParseError("arc kind must be A, B, or C, got \"" + s + "\"");
}

std::string to_string(CheckMode m) {
  switch (m) {
    case CheckMode::minimal: return "minimal";
    case CheckMode::cmc: return "cmc";
    case CheckMode::translating: return "translating";
  }
  return "?";
}

double CircularArcGeom::sweep() const {
  double s = to_angle - from_angle;
  const double two_pi = 2.0 * M_PI;
  if (ccw) {
    while (s <= 0.0) s += two_pi;
    while (s > two_pi) s -= two_pi;
  } else {
    while (s >= 0.0) s -= two_pi;
    while (s < -two_pi) s += two_pi;
  }
  return s;
}

Vec2 ArcGeometry::point(double t) const {
  if (const auto* s = std::get_if<SegmentGeom>(&geom_)) return lerp(s->p, s->q, t);
  if (const auto* c = std::get_if<CircularArcGeom>(&geom_)) {
    const double a = c->from_angle + t * c->sweep();
    return {c->center.x + c->radius * std::cos(a), c->center.y + c->radius * std::sin(a)};
  }
  const auto& pts = std::get<SampledGeom>(geom_).points;
  if (pts.size() < 2) throw DegenerateInputError("sampled arc needs >= 2 points");
  const double pos = t * static_cast<double>(pts.size() - 1);
  const size_t i = std::min(pts.size() - 2, static_cast<size_t>(std::max(0.0, pos)));
  return lerp(pts[i], pts[i + 1], pos - static_cast<double>(i));
}

Vec2 ArcGeometry::velocity(double t) const {
  if (const auto* s = std::get_if<SegmentGeom>(&geom_)) return s->q - s->p;
  if (const auto* c = std::get_if<CircularArcGeom>(&geom_)) {
    const double sw = c->sweep();
    const double a = c->from_angle + t * sw;
    return {-c->radius * std::sin(a) * sw, c->radius * std::cos(a) * sw};
  }
  const auto& pts = std::get<SampledGeom>(geom_).points;
  const double n = static_cast<double>(pts.size() - 1);
  const size_t i = std::min(pts.size() - 2,
                            static_cast<size_t>(std::max(0.0, t * n)));
  return (pts[i + 1] - pts[i]) * n;
}

double ArcGeometry::euclid_length() const {
  if (const auto* s = std::get_if<SegmentGeom>(&geom_)) return dist(s->p, s->q);
  if (const auto* c = std::get_if<CircularArcGeom>(&geom_))
    return c->radius * std::abs(c->sweep());
  return polyline_euclid_length(std::get<SampledGeom>(geom_).points);
}

std::vector<Vec2> ArcGeometry::polyline(int n) const {
  std::vector<Vec2> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) out.push_back(point(static_cast<double>(i) / n));
  return out;
}

double ArcGeometry::project(Vec2 p) const {
  if (const auto* s = std::get_if<SegmentGeom>(&geom_)) {
    const Vec2 d = s->q - s->p;
    const double l2 = norm2(d);
    if (l2 == 0.0) return 0.0;
    return std::clamp(dot(p - s->p, d) / l2, 0.0, 1.0);
  }
  if (const auto* c = std::get_if<CircularArcGeom>(&geom_)) {
    const double ang = std::atan2(p.y - c->center.y, p.x - c->center.x);
    const double sw = c->sweep();
    double rel = ang - c->from_angle;
    const double two_pi = 2.0 * M_PI;
    // bring rel into the traversed angular window
    if (sw > 0) {
      while (rel < 0) rel += two_pi;
      while (rel > two_pi) rel -= two_pi;
      if (rel > sw) rel = (rel - sw < two_pi - rel) ? sw : 0.0;  // clamp to nearer end
    } else {
      while (rel > 0) rel -= two_pi;
      while (rel < -two_pi) rel += two_pi;
      if (rel < sw) rel = (sw - rel < rel + two_pi) ? sw : 0.0;
    }
    return rel / sw;
  }
  const auto& pts = std::get<SampledGeom>(geom_).points;
  double best = 0.0, best_d = std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(pts.size() - 1);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 d = pts[i + 1] - pts[i];
    const double l2 = norm2(d);
    const double t = l2 == 0.0 ? 0.0 : std::clamp(dot(p - pts[i], d) / l2, 0.0, 1.0);
    const double dd = dist(p, pts[i] + d * t);
    if (dd < best_d) {
      best_d = dd;
      best = (static_cast<double>(i) + t) / n;
    }
  }
  return best;
}

double ArcGeometry::euclid_curvature_left() const {
  if (std::holds_alternative<SegmentGeom>(geom_)) return 0.0;
  if (const auto* c = std::get_if<CircularArcGeom>(&geom_))
    return (c->ccw ? 1.0 : -1.0) / c->radius;
  return 0.0;  // sampled arcs: handled by discrete sampling where needed
}

double Arc::sigma_curvature_left(const ConformalMetric& metric, double t) const {
  if (std::holds_alternative<SampledGeom>(geometry.raw())) {
    // discrete three-point estimate around parameter t
    const double dt = 1.0 / 64.0;
    const double tc = std::clamp(t, dt, 1.0 - dt);
    const Vec2 pts[3] = {geometry.point(tc - dt), geometry.point(tc), geometry.point(tc + dt)};
    return geodesic_curvature(std::span<const Vec2>(pts, 3), metric, 1, CurveSide::left);
  }
  const double kappa_e = geometry.euclid_curvature_left();
  if (metric.is_euclidean()) return kappa_e;
  const Vec2 p = geometry.point(t);
  const Vec2 nu = normalized(perp(geometry.velocity(t)));
  const double lam = metric.lambda(p);
  return (kappa_e - dot(metric.dlog_lambda(p), nu)) / lam;
}

std::vector<Vec2> DomainSpec::vertices() const {
  std::vector<Vec2> v;
  v.reserve(arcs.size());
  for (const auto& a : arcs) v.push_back(a.geometry.start());
  return v;
}

bool DomainSpec::has_kind(ArcKind k) const {
  return std::any_of(arcs.begin(), arcs.end(), [k](const Arc& a) { return a.kind == k; });
}

std::vector<int> DomainSpec::arcs_of_kind(ArcKind k) const {
  std::vector<int> out;
  for (size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i].kind == k) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<Vec2> DomainSpec::boundary_polyline(int samples_per_arc,
                                                std::vector<int>* arc_of_point) const {
  std::vector<Vec2> out;
  if (arc_of_point) arc_of_point->clear();
  for (size_t i = 0; i < arcs.size(); ++i) {
    const auto pts = arcs[i].geometry.polyline(samples_per_arc);
    for (int j = 0; j + 1 < static_cast<int>(pts.size()); ++j) {  // drop shared endpoint
      out.push_back(pts[j]);
      if (arc_of_point) arc_of_point->push_back(static_cast<int>(i));
    }
  }
  return out;
}

double DomainSpec::diameter() const {
  const auto pts = boundary_polyline(16);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  return norm({xmax - xmin, ymax - ymin});
}

bool DomainSpec::point_in_closure(Vec2 p, double tol) const {
  const auto poly = boundary_polyline(64);
  return point_in_closed_polygon(poly, p, tol);
}

namespace {

Vec2 parse_point(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

void reject_unknown_keys(const ordered_json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) throw ParseError(where + ": unknown key \"" + it.key() + "\"");
  }
}

ConformalMetric parse_metric(const ordered_json& j) {
  if (!j.is_object()) throw ParseError("metric: expected object");
  const std::string kind = j.value("kind", "");
  if (kind == "euclidean") {
    reject_unknown_keys(j, {"kind"}, "metric");
    return ConformalMetric::euclidean();
  }
  if (kind == "poincare_disk") {
    reject_unknown_keys(j, {"kind", "radius"}, "metric");
    if (!j.contains("radius")) throw ParseError("metric: poincare_disk needs radius");
    return ConformalMetric::poincare_disk(j["radius"].get<double>());
  }
  if (kind == "custom") {
    reject_unknown_keys(j, {"kind", "lambda"}, "metric");
    if (!j.contains("lambda")) throw ParseError("metric: custom needs lambda expression");
    return ConformalMetric::custom(j["lambda"].get<std::string>());
  }
  throw ParseError("metric: unknown kind \"" + kind + "\"");
}

ordered_json metric_to_json(const ConformalMetric& m) {
  ordered_json j;
  switch (m.kind()) {
    case MetricKind::euclidean: j["kind"] = "euclidean"; break;
    case MetricKind::poincare_disk:
      j["kind"] = "poincare_disk";
      j["radius"] = m.radius();
      break;
    case MetricKind::custom:
      j["kind"] = "custom";
      j["lambda"] = m.lambda_text();
      break;
  }
  return j;
}

ArcGeometry parse_geometry(const ordered_json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": geometry must be an object");
  const std::string type = j.value("type", "");
  if (type == "segment") {
    reject_unknown_keys(j, {"type", "p", "q"}, where);
    return ArcGeometry(SegmentGeom{parse_point(j.at("p"), where + ".p"),
                                   parse_point(j.at("q"), where + ".q")});
  }
  if (type == "circular_arc") {
    reject_unknown_keys(j, {"type", "center", "radius", "from_angle", "to_angle", "ccw"},
                        where);
    CircularArcGeom g;
    g.center = parse_point(j.at("center"), where + ".center");
    g.radius = j.at("radius").get<double>();
    g.from_angle = j.at("from_angle").get<double>();
    g.to_angle = j.at("to_angle").get<double>();
    g.ccw = j.at("ccw").get<bool>();
    if (!(g.radius > 0)) throw ParseError(where + ": radius must be positive");
    return ArcGeometry(g);
  }
  if (type == "sampled") {
    reject_unknown_keys(j, {"type", "points"}, where);
    SampledGeom g;
    for (const auto& p : j.at("points")) g.points.push_back(parse_point(p, where + ".points"));
    if (g.points.size() < 2) throw ParseError(where + ": sampled needs >= 2 points");
    return ArcGeometry(g);
  }
  throw ParseError(where + ": unknown geometry type \"" + type + "\"");
}

ordered_json geometry_to_json(const ArcGeometry& g) {
  ordered_json j;
  if (const auto* s = std::get_if<SegmentGeom>(&g.raw())) {
    j["type"] = "segment";
    j["p"] = {s->p.x, s->p.y};
    j["q"] = {s->q.x, s->q.y};
  } else if (const auto* c = std::get_if<CircularArcGeom>(&g.raw())) {
    j["type"] = "circular_arc";
    j["center"] = {c->center.x, c->center.y};
    j["radius"] = c->radius;
    j["from_angle"] = c->from_angle;
    j["to_angle"] = c->to_angle;
    j["ccw"] = c->ccw;
  } else {
    const auto& pts = std::get<SampledGeom>(g.raw()).points;
    j["type"] = "sampled";
    auto arr = ordered_json::array();
    for (const auto& p : pts) arr.push_back({p.x, p.y});
    j["points"] = arr;
  }
  return j;
}

}  // namespace

DomainSpec DomainSpec::from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // recover line/column from the byte offset
    size_t line = 1, col = 1;
    for (size_t i = 0; i < std::min(text.size(), static_cast<size_t>(e.byte)); ++i) {
      if (text[i] == '\n') { ++line; col = 1; }
      else ++col;
    }
    throw ParseError("domain JSON: parse error at line " + std::to_string(line) +
                     ", column " + std::to_string(col) + ": " + e.what());
  }
  reject_unknown_keys(j, {"name", "metric", "arcs"}, "domain");
  DomainSpec spec;
  spec.name = j.value("name", "domain");
  spec.metric = j.contains("metric") ? parse_metric(j["metric"]) : ConformalMetric::euclidean();
  if (!j.contains("arcs") || !j["arcs"].is_array() || j["arcs"].empty())
    throw ParseError("domain: needs a non-empty arcs array");
  for (size_t i = 0; i < j["arcs"].size(); ++i) {
    const auto& ja = j["arcs"][i];
    const std::string where = "arcs[" + std::to_string(i) + "]";
    reject_unknown_keys(ja, {"id", "kind", "geometry", "data"}, where);
    Arc arc;
    arc.id = ja.value("id", "arc" + std::to_string(i));
    if (arc.id.find_first_of(" \t\n") != std::string::npos)
      throw ParseError(where + ": arc id must not contain whitespace");
    arc.kind = arc_kind_from_string(ja.value("kind", ""));
    arc.geometry = parse_geometry(ja.at("geometry"), where);
    if (ja.contains("data")) {
      if (arc.kind != ArcKind::C)
        throw ParseError(where + ": data is only allowed on C arcs");
      arc.data_text = ja["data"].get<std::string>();
      arc.data = Expression::parse(arc.data_text);
    } else if (arc.kind == ArcKind::C) {
      throw ParseError(where + ": C arc requires a data expression");
    }
    spec.arcs.push_back(std::move(arc));
  }
  return spec;
}

DomainSpec DomainSpec::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open domain file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string DomainSpec::to_json_text() const {
  ordered_json j;
  j["name"] = name;
  j["metric"] = metric_to_json(metric);
  auto arr = ordered_json::array();
  for (const auto& a : arcs) {
    ordered_json ja;
    ja["id"] = a.id;
    ja["kind"] = to_string(a.kind);
    ja["geometry"] = geometry_to_json(a.geometry);
    if (a.kind == ArcKind::C) ja["data"] = a.data_text;
    arr.push_back(ja);
  }
  j["arcs"] = arr;
  return j.dump(2);
}

ValidationReport validate_domain(const DomainSpec& spec, CheckMode mode,
                                 const ValidationOptions& opt) {
  ValidationReport rep;
  auto issue = [&rep](std::string code, std::string msg, std::vector<std::string> ids = {}) {
    rep.ok = false;
    rep.issues.push_back({std::move(code), std::move(msg), std::move(ids)});
  };

  const size_t n = spec.arcs.size();
  if (n == 0) {
    issue("empty", "domain has no arcs");
    return rep;
  }
  const double scale = std::max(spec.diameter(), 1e-300);
  const double tol = 1e-9 * scale;

  // metric definition set covers the boundary
  for (size_t i = 0; i < n; ++i)
    for (const Vec2 p : spec.arcs[i].geometry.polyline(opt.samples_per_arc))
      if (!spec.metric.contains(p)) {
        issue("outside_metric", "arc " + spec.arcs[i].id + " leaves the metric's definition set",
              {spec.arcs[i].id});
        return rep;
      }

  // closed chain
  for (size_t i = 0; i < n; ++i) {
    const Arc& a = spec.arcs[i];
    const Arc& b = spec.arcs[(i + 1) % n];
    if (dist(a.geometry.end(), b.geometry.start()) > tol)
      issue("open_boundary",
            "arcs " + a.id + " and " + b.id + " do not share an endpoint", {a.id, b.id});
    if (dist(a.geometry.start(), a.geometry.end()) <= tol)
      issue("closed_arc", "arc " + a.id + " has coincident endpoints; split it", {a.id});
  }
  if (!rep.ok) return rep;

  // orientation and simplicity of the dense boundary approximation
  const auto poly = spec.boundary_polyline(opt.samples_per_arc);
  if (polygon_signed_area(poly) <= 0)
    issue("orientation", "boundary is not counterclockwise");
  if (!polygon_is_simple(poly, 1e-12 * scale))
    issue("self_intersection", "boundary self-intersects");

  // no two A arcs and no two B arcs share an endpoint
  for (size_t i = 0; i < n; ++i) {
    const Arc& a = spec.arcs[i];
    const Arc& b = spec.arcs[(i + 1) % n];
    if (a.kind == b.kind && (a.kind == ArcKind::A || a.kind == ArcKind::B))
      issue("adjacent_blowup",
            "two " + to_string(a.kind) + " arcs share an endpoint: " + a.id + ", " + b.id,
            {a.id, b.id});
  }

  // curvature conditions (sampled away from the very endpoints)
  const double kappa_slack = opt.curvature_slack;
  for (size_t i = 0; i < n; ++i) {
    const Arc& a = spec.arcs[i];
    double min_k = 1e300, max_abs_k = 0.0;
    for (int s = 1; s < opt.samples_per_arc; ++s) {
      const double t = static_cast<double>(s) / opt.samples_per_arc;
      const double k = a.sigma_curvature_left(spec.metric, t);
      min_k = std::min(min_k, k);
      max_abs_k = std::max(max_abs_k, std::abs(k));
    }
    if (mode != CheckMode::cmc) {
      if ((a.kind == ArcKind::A || a.kind == ArcKind::B) && max_abs_k > kappa_slack)
        issue("non_geodesic",
              "arc " + a.id + " (" + to_string(a.kind) + ") is not a geodesic: max |kappa| = " +
                  std::to_string(max_abs_k),
              {a.id});
      if (a.kind == ArcKind::C && min_k < -kappa_slack)
        issue("non_convex",
              "C arc " + a.id + " is not convex toward the domain: min kappa = " +
                  std::to_string(min_k),
              {a.id});
    }
  }

  return rep;
}

}  // namespace jsgraph
