#include "jsgraph/checks.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "jsgraph/errors.hpp"

namespace jsgraph {

using ordered_json = nlohmann::ordered_json;

namespace {

// 3-point Gauss on [0,1]
constexpr double kGx[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr double kGw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// signed sigma-area of the patch between the chord a->b and the curve
// gamma(s) (s on [0,1], gamma(0)=a, gamma(1)=b): positive when the curve
// bulges to the right of the traversal (outward on a CCW polygon)
double patch_correction(const ConformalMetric& metric, Vec2 a, Vec2 b,
                        const std::function<Vec2(double)>& gamma,
                        const std::function<Vec2(double)>& dgamma, int s_panels) {
  double total = 0.0;
  const Vec2 cp = b - a;
  for (int p = 0; p < s_panels; ++p) {
    for (int gs = 0; gs < 3; ++gs) {
      const double s = (p + kGx[gs]) / s_panels;
      const Vec2 g = gamma(s), gp = dgamma(s);
      const Vec2 c = lerp(a, b, s);
      const Vec2 phi_t = g - c;
      for (int gt = 0; gt < 3; ++gt) {
        const double t = kGx[gt];
        const Vec2 phi = lerp(c, g, t);
        const Vec2 phi_s = cp * (1.0 - t) + gp * t;
        const double lam = metric.lambda(phi);
        total += kGw[gs] * kGw[gt] * lam * lam * cross(phi_t, phi_s) / s_panels;
      }
    }
  }
  return total;
}

double side_correction(const DomainSpec& spec, const PolygonSide& side, Vec2 a, Vec2 b) {
  if (side.type == PolygonSide::Type::boundary_arc) {
    const ArcGeometry& geo = spec.arcs[side.on_arcs.front()].geometry;
    if (geo.is_segment()) return 0.0;
    return patch_correction(
        spec.metric, a, b, [&](double s) { return geo.point(s); },
        [&](double s) { return geo.velocity(s); }, 96);
  }
  // polyline side (conformal geodesic chord): piecewise-linear gamma
  const auto& pts = side.polyline;
  if (pts.size() < 3) return 0.0;
  const double n = static_cast<double>(pts.size() - 1);
  auto gamma = [&](double s) {
    const double pos = s * n;
    const size_t i = std::min(pts.size() - 2, static_cast<size_t>(std::max(0.0, pos)));
    return lerp(pts[i], pts[i + 1], pos - static_cast<double>(i));
  };
  auto dgamma = [&](double s) {
    const double pos = s * n;
    const size_t i = std::min(pts.size() - 2, static_cast<size_t>(std::max(0.0, pos)));
    return (pts[i + 1] - pts[i]) * n;
  };
  return patch_correction(spec.metric, a, b, gamma, dgamma,
                          static_cast<int>(pts.size() - 1));
}

double polygon_sigma_area(const DomainSpec& spec, const AdmissiblePolygon& poly) {
  if (spec.metric.is_euclidean()) {
    double green = 0.0;
    for (const auto& s : poly.sides) green += s.green_term;
    return std::abs(green);
  }
  // chord polygon through the vertices, then per-side curvature corrections
  std::vector<Vec2> corners;
  for (const auto& s : poly.sides) corners.push_back(s.polyline.front());
  const auto tris_idx = ear_clip(corners);
  std::vector<Triangle2> tris;
  for (const auto& t : tris_idx) {
    const Triangle2 tri{corners[t[0]], corners[t[1]], corners[t[2]]};
    if (triangle_area(tri) != 0.0) tris.push_back(tri);
  }
  double area = metric_area_adaptive(tris, spec.metric, 1e-10, 14);
  for (const auto& s : poly.sides)
    area += side_correction(spec, s, s.polyline.front(), s.polyline.back());
  return area;
}

PolygonRecord build_record(const DomainSpec& spec, const AdmissiblePolygon& poly,
                           CheckMode mode, double H) {
  PolygonRecord rec;
  rec.id = poly.id;
  rec.vertices = poly.vertex_indices;
  rec.whole_boundary = poly.is_whole_boundary;
  rec.indeterminate = poly.indeterminate;
  for (const auto& s : poly.sides) {
    rec.ell += s.sigma_length;
    if (s.on_arcs.size() == 1 && s.type == PolygonSide::Type::boundary_arc) {
      const ArcKind k = spec.arcs[s.on_arcs.front()].kind;
      if (k == ArcKind::A) rec.alpha += s.sigma_length;
      if (k == ArcKind::B) rec.beta += s.sigma_length;
    } else {
      // a side covering a run of boundary arcs counts their exact lengths
      for (const int ai : s.on_arcs) {
        const Arc& arc = spec.arcs[ai];
        if (arc.kind == ArcKind::C) continue;
        double len;
        if (std::holds_alternative<SampledGeom>(arc.geometry.raw()))
          len = metric_length(std::get<SampledGeom>(arc.geometry.raw()).points, spec.metric);
        else if (spec.metric.is_euclidean())
          len = arc.geometry.euclid_length();
        else
          len = metric_length_param([&](double t) { return arc.geometry.point(t); },
                                    [&](double t) { return arc.geometry.velocity(t); }, 0.0,
                                    1.0, spec.metric, 64);
        if (arc.kind == ArcKind::A) rec.alpha += len;
        if (arc.kind == ArcKind::B) rec.beta += len;
      }
    }
  }
  if (!poly.indeterminate) rec.area = polygon_sigma_area(spec, poly);
  const double h_term = mode == CheckMode::cmc ? H * rec.area : 0.0;
  rec.margin_alpha = 2.0 * rec.alpha - rec.ell - h_term;
  rec.margin_beta = 2.0 * rec.beta - rec.ell + h_term;
  return rec;
}

void fail(CheckReport& rep, const std::string& what) {
  rep.pass = false;
  if (rep.certificate.empty()) rep.certificate = what;
}

CheckReport begin_report(const DomainSpec& spec, CheckMode mode, double H,
                         const CheckOptions& opt) {
  CheckReport rep;
  rep.mode = mode;
  rep.H = H;
  rep.domain_name = spec.name;
  const double scale = spec.diameter();
  rep.slack_strict = opt.slack.strict_rel * scale;
  rep.slack_equality = opt.slack.equality_rel * scale;
  rep.pass = true;

  const auto validation = validate_domain(spec, mode, opt.validation);
  rep.validated = validation.ok;
  rep.validation_issues = validation.issues;
  if (!validation.ok) fail(rep, "validation: " + validation.issues.front().message);
  return rep;
}

// strict polygon inequalities shared by the three checkers
void enforce_polygons(const DomainSpec& spec, CheckReport& rep,
                      const std::vector<AdmissiblePolygon>& polys, CheckMode mode, double H,
                      bool strict_on_boundary, bool enforce_beta) {
  for (const auto& poly : polys) {
    PolygonRecord rec = build_record(spec, poly, mode, H);
    if (poly.indeterminate) {
      rec.enforced = false;
      rec.alpha_ok = rec.beta_ok = false;
      fail(rep, "polygon " + rec.id + " indeterminate (geodesic side did not converge)");
      rep.polygons.push_back(std::move(rec));
      continue;
    }
    // sanity: the A and B sides are part of the perimeter
    if (rec.alpha + rec.beta > rec.ell + rep.slack_strict)
      fail(rep, "internal: alpha + beta exceeds the perimeter of " + rec.id);

    const bool enforce = strict_on_boundary || !rec.whole_boundary;
    rec.enforced = enforce;
    rec.alpha_ok = rec.margin_alpha < -rep.slack_strict;
    rec.beta_ok = rec.margin_beta < -rep.slack_strict;
    if (enforce) {
      if (!rec.alpha_ok)
        fail(rep, "2 alpha < ell" + std::string(mode == CheckMode::cmc ? " + H area" : "") +
                      " fails for " + rec.id + " (margin " +
                      std::to_string(rec.margin_alpha) + ")");
      if (enforce_beta && !rec.beta_ok)
        fail(rep, "2 beta < ell" + std::string(mode == CheckMode::cmc ? " - H area" : "") +
                      " fails for " + rec.id + " (margin " +
                      std::to_string(rec.margin_beta) + ")");
    }
    if (rec.whole_boundary) {
      rep.alpha_boundary = rec.alpha;
      rep.beta_boundary = rec.beta;
      rep.area_domain = rec.area;
    }
    rep.polygons.push_back(std::move(rec));
  }
}

}  // namespace

CheckReport check_minimal(const DomainSpec& spec, const CheckOptions& opt) {
  CheckReport rep = begin_report(spec, CheckMode::minimal, 0.0, opt);
  if (!rep.validated) return rep;

  const bool has_c = spec.has_kind(ArcKind::C);
  auto polys = enumerate_admissible_polygons(spec, CheckMode::minimal, 0.0, opt.enumerate);

  if (!has_c) {
    // the boundary polygon is exempt from strictness; it carries the equality
    std::vector<AdmissiblePolygon> inner;
    for (auto& p : polys) {
      if (p.is_whole_boundary) {
        PolygonRecord rec = build_record(spec, p, CheckMode::minimal, 0.0);
        rec.enforced = false;
        rep.alpha_boundary = rec.alpha;
        rep.beta_boundary = rec.beta;
        rep.area_domain = rec.area;
        rep.equality_checked = true;
        rep.equality_residual = rec.alpha - rec.beta;
        if (std::abs(rep.equality_residual) > rep.slack_equality)
          fail(rep, "alpha(boundary) = beta(boundary) fails (residual " +
                        std::to_string(rep.equality_residual) + ")");
        rep.polygons.push_back(std::move(rec));
      } else {
        inner.push_back(std::move(p));
      }
    }
    enforce_polygons(spec, rep, inner, CheckMode::minimal, 0.0, true, true);
  } else {
    enforce_polygons(spec, rep, polys, CheckMode::minimal, 0.0, true, true);
  }
  return rep;
}

CheckReport check_translating(const DomainSpec& spec, const CheckOptions& opt) {
  if (spec.has_kind(ArcKind::B))
    throw UnsupportedError(
        "translating check: the existence theorem requires {B} empty; relabel or remove "
        "the B arcs");
  if (!spec.has_kind(ArcKind::C))
    throw UnsupportedError(
        "translating check: the existence theorem presumes continuous (C) arcs; none "
        "present");

  CheckReport rep = begin_report(spec, CheckMode::translating, 0.0, opt);
  rep.notes.push_back(
      "sufficient conditions only: the theorem does not claim necessity");
  rep.notes.push_back(
      "strictness applied to every polygon including the whole boundary");
  if (!rep.validated) return rep;

  auto polys = enumerate_admissible_polygons(spec, CheckMode::translating, 0.0, opt.enumerate);
  enforce_polygons(spec, rep, polys, CheckMode::translating, 0.0, true, false);
  return rep;
}

CheckReport check_cmc(const DomainSpec& spec, double H, const CheckOptions& opt) {
  if (!spec.metric.is_euclidean())
    throw UnsupportedError("cmc check: only the euclidean metric is supported");
  if (!(H > 0.0)) throw UnsupportedError("cmc check: H must be positive");

  CheckReport rep = begin_report(spec, CheckMode::cmc, H, opt);
  if (!rep.validated) return rep;

  const int kSamples = 32;

  // (i) curvature hypotheses: kappa(A) = H, kappa(B) = -H, kappa(C) >= H
  std::vector<char> arc_is_pm_h(spec.arcs.size(), 0);
  for (size_t i = 0; i < spec.arcs.size(); ++i) {
    const Arc& arc = spec.arcs[i];
    double worst = 0.0, min_k = 1e300;
    for (int s = 1; s < kSamples; ++s) {
      const double k = arc.sigma_curvature_left(spec.metric, static_cast<double>(s) / kSamples);
      min_k = std::min(min_k, k);
      const double dev = arc.kind == ArcKind::A   ? std::abs(k - H)
                         : arc.kind == ArcKind::B ? std::abs(k + H)
                                                  : std::max(0.0, H - k);
      worst = std::max(worst, dev);
    }
    HypothesisRecord h;
    h.id = "curvature:" + arc.id;
    h.measured = min_k;
    h.required = arc.kind == ArcKind::B ? -H : H;
    h.pass = worst <= opt.slack.curvature;
    h.detail = "kind " + to_string(arc.kind) + ", worst deviation " + std::to_string(worst);
    if (!h.pass)
      fail(rep, "curvature hypothesis fails on arc " + arc.id + " (" + h.detail + ")");
    arc_is_pm_h[i] = std::abs(min_k - H) <= opt.slack.curvature ||
                     std::abs(min_k + H) <= opt.slack.curvature;
    rep.hypotheses.push_back(std::move(h));
  }

  // (ii) |B_i| < pi / H strictly
  for (const int i : spec.arcs_of_kind(ArcKind::B)) {
    const Arc& arc = spec.arcs[i];
    const double len = arc.geometry.euclid_length();
    HypothesisRecord h;
    h.id = "b_length:" + arc.id;
    h.measured = len;
    h.required = M_PI / H;
    h.pass = len < M_PI / H - rep.slack_strict;
    h.detail = "strict bound |B| < pi/H";
    if (!h.pass)
      fail(rep, "B arc " + arc.id + " has length " + std::to_string(len) +
                    " >= pi/H = " + std::to_string(M_PI / H));
    rep.hypotheses.push_back(std::move(h));
  }

  // (iii) the reflected domain fits in a disk of radius 1/H
  {
    std::vector<Vec2> sample;
    for (const auto& arc : spec.arcs) {
      const auto pts = arc.geometry.polyline(128);
      if (arc.kind != ArcKind::B) {
        sample.insert(sample.end(), pts.begin(), pts.end());
      } else {
        const Vec2 u = arc.geometry.start(), v = arc.geometry.end();
        const Vec2 d = normalized(v - u);
        for (const Vec2& p : pts) {
          const Vec2 w = p - u;
          sample.push_back(u + d * (2.0 * dot(w, d)) - w);  // reflect across the chord
        }
      }
    }
    const Disk disk = smallest_enclosing_disk(sample);
    HypothesisRecord h;
    h.id = "reflected_disk";
    h.measured = disk.radius;
    h.required = 1.0 / H;
    h.pass = disk.radius <= 1.0 / H + rep.slack_equality;
    h.detail = "smallest enclosing disk of the reflected domain";
    if (!h.pass)
      fail(rep, "reflected domain needs radius " + std::to_string(disk.radius) +
                    " > 1/H = " + std::to_string(1.0 / H));
    rep.hypotheses.push_back(std::move(h));
  }

  // (iv) area-weighted inequalities over CMC-admissible polygons
  auto polys = enumerate_admissible_polygons(spec, CheckMode::cmc, H, opt.enumerate);
  // the whole boundary participates only when all of its sides have curvature +-H
  const bool boundary_admissible =
      std::all_of(arc_is_pm_h.begin(), arc_is_pm_h.end(), [](char b) { return b != 0; });
  if (!boundary_admissible)
    rep.notes.push_back(
        "whole boundary is not a curvature +-H polygon; its margins are informational");
  enforce_polygons(spec, rep, polys, CheckMode::cmc, H, boundary_admissible, true);

  // (v) {C} empty: alpha = beta + H Area(Omega)
  if (!spec.has_kind(ArcKind::C)) {
    rep.equality_checked = true;
    rep.equality_residual = rep.alpha_boundary - rep.beta_boundary - H * rep.area_domain;
    if (std::abs(rep.equality_residual) > rep.slack_equality)
      fail(rep, "alpha = beta + H Area(Omega) fails (residual " +
                    std::to_string(rep.equality_residual) + ")");
  }
  return rep;
}

CheckReport run_check(const DomainSpec& spec, CheckMode mode, double H,
                      const CheckOptions& opt) {
  switch (mode) {
    case CheckMode::minimal: return check_minimal(spec, opt);
    case CheckMode::translating: return check_translating(spec, opt);
    case CheckMode::cmc: return check_cmc(spec, H, opt);
  }
  throw UnsupportedError("unknown check mode");
}

std::string CheckReport::to_json_text() const {
  ordered_json j;
  j["mode"] = to_string(mode);
  if (mode == CheckMode::cmc) j["H"] = H;
  j["domain"] = domain_name;
  j["sign_convention"] =
      "upward normal N = (X - grad u)/W; div(grad u / W) = H; lower cap has H = +2/R";
  j["slack"] = {{"strict", slack_strict}, {"equality", slack_equality}};
  j["validated"] = validated;
  auto issues = ordered_json::array();
  for (const auto& i : validation_issues)
    issues.push_back({{"code", i.code}, {"message", i.message}, {"arcs", i.arc_ids}});
  j["validation_issues"] = issues;
  auto hyps = ordered_json::array();
  for (const auto& h : hypotheses)
    hyps.push_back({{"id", h.id},
                    {"pass", h.pass},
                    {"measured", h.measured},
                    {"required", h.required},
                    {"detail", h.detail}});
  j["hypotheses"] = hyps;
  auto polys = ordered_json::array();
  for (const auto& p : polygons) {
    ordered_json pj;
    pj["id"] = p.id;
    pj["vertices"] = p.vertices;
    pj["whole_boundary"] = p.whole_boundary;
    pj["alpha"] = p.alpha;
    pj["beta"] = p.beta;
    pj["ell"] = p.ell;
    pj["area"] = p.area;
    pj["margin_alpha"] = p.margin_alpha;
    pj["margin_beta"] = p.margin_beta;
    pj["enforced"] = p.enforced;
    pj["status"] = p.indeterminate ? "indeterminate" : "ok";
    polys.push_back(std::move(pj));
  }
  j["polygons"] = polys;
  j["global"] = {{"alpha_boundary", alpha_boundary},
                 {"beta_boundary", beta_boundary},
                 {"area_domain", area_domain},
                 {"equality_checked", equality_checked},
                 {"equality_residual", equality_residual}};
  j["notes"] = notes;
  j["verdict"] = pass ? "pass" : "fail";
  j["certificate"] = certificate;
  return j.dump(2);
}

std::string CheckReport::to_csv_text() const {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out =
      "polygon,whole_boundary,alpha,beta,ell,area,margin_alpha,margin_beta,enforced,status\n";
  for (const auto& p : polygons)
    out += p.id + "," + (p.whole_boundary ? "1" : "0") + "," + fmt(p.alpha) + "," +
           fmt(p.beta) + "," + fmt(p.ell) + "," + fmt(p.area) + "," + fmt(p.margin_alpha) +
           "," + fmt(p.margin_beta) + "," + (p.enforced ? "1" : "0") + "," +
           (p.indeterminate ? "indeterminate" : "ok") + "\n";
  out += "verdict," + std::string(pass ? "pass" : "fail") + ",,,,,,,,\n";
  return out;
}

}  // namespace jsgraph
