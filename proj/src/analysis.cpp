#include "jsgraph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "jsgraph/errors.hpp"

namespace jsgraph {

GraphSurface make_surface(const TriMesh& mesh, const ConformalMetric& metric,
                          std::vector<double> heights) {
  if (heights.size() != mesh.vertices.size())
    throw DomainError("make_surface: height count does not match the mesh");
  return {&mesh, &metric, std::move(heights)};
}

double WeightedArea::value() const { return std::exp(log_value); }

namespace {

// per-triangle log of e^{c <u>} * W * lambda^2 * area
double log_triangle_term(const GraphSurface& s, const std::array<int, 3>& t, double c) {
  const Vec2 a = s.mesh->vertices[t[0]], b = s.mesh->vertices[t[1]],
             d = s.mesh->vertices[t[2]];
  const double twice = cross(b - a, d - a);
  const double area = 0.5 * std::abs(twice);
  if (area == 0.0) throw DegenerateInputError("weighted_area: degenerate triangle");
  const Vec2 grad_u = (perp(d - b) * s.heights[t[0]] + perp(a - d) * s.heights[t[1]] +
                       perp(b - a) * s.heights[t[2]]) /
                      twice;
  const double lam = s.metric->lambda((a + b + d) / 3.0);
  const double w = std::sqrt(1.0 + norm2(grad_u) / (lam * lam));
  const double mean_u = (s.heights[t[0]] + s.heights[t[1]] + s.heights[t[2]]) / 3.0;
  return c * mean_u + std::log(w * lam * lam * area);
}

}  // namespace

WeightedArea weighted_area(const GraphSurface& surface, double c) {
  if (surface.mesh->triangles.empty()) throw DomainError("weighted_area: empty surface");
  WeightedArea out;
  double cu_max = 0.0;
  for (const double u : surface.heights) cu_max = std::max(cu_max, std::abs(c * u));
  out.overflowed = cu_max > 300.0;

  // log-sum-exp over the triangle terms
  std::vector<double> logs;
  logs.reserve(surface.mesh->triangles.size());
  double lmax = -std::numeric_limits<double>::infinity();
  for (const auto& t : surface.mesh->triangles) {
    logs.push_back(log_triangle_term(surface, t, c));
    lmax = std::max(lmax, logs.back());
  }
  double s = 0.0;
  for (const double l : logs) s += std::exp(l - lmax);
  out.log_value = lmax + std::log(s);
  return out;
}

MinimalityReport minimality_test(const GraphSurface& surface, double c, int trials,
                                 unsigned seed, const std::vector<double>& epsilons) {
  MinimalityReport rep;
  rep.trials = trials;
  const WeightedArea base = weighted_area(surface, c);
  const double a0 = base.value();
  if (!std::isfinite(a0))
    throw NumericError("minimality_test: weighted area overflows; rescale the heights");

  // interior nodes (perturbations vanish on the boundary)
  std::vector<int> interior;
  for (size_t i = 0; i < surface.mesh->markers.size(); ++i)
    if (surface.mesh->markers[i].kind == VertexMarkerKind::interior)
      interior.push_back(static_cast<int>(i));
  if (interior.empty()) throw DomainError("minimality_test: no interior nodes");

  for (int trial = 0; trial < trials; ++trial) {
    // per-trial seed derived from the root seed
    std::mt19937 rng(seed + 0x9e3779b9u * static_cast<unsigned>(trial + 1));
    std::uniform_real_distribution<double> pick(-1.0, 1.0);
    std::vector<double> phi(surface.heights.size(), 0.0);
    double norm_inf = 0.0;
    for (const int i : interior) {
      phi[i] = pick(rng);
      norm_inf = std::max(norm_inf, std::abs(phi[i]));
    }
    for (const int i : interior) phi[i] /= norm_inf;  // unit sup norm

    bool failed = false;
    for (const double eps_mag : epsilons) {
      const double tol = 1e-3 * eps_mag * eps_mag * a0;
      rep.tol_quad = tol;
      double a_plus = 0.0, a_minus = 0.0;
      for (const double eps : {eps_mag, -eps_mag}) {
        GraphSurface pert = surface;
        for (const int i : interior) pert.heights[i] += eps * phi[i];
        const double a_eps = weighted_area(pert, c).value();
        (eps > 0 ? a_plus : a_minus) = a_eps;
        const double gain = a_eps - a0;
        rep.worst_first_order = std::min(rep.worst_first_order, gain);
        if (gain < -tol) {
          ++rep.first_order_failures;
          failed = true;
        }
      }
      const double second = a_plus + a_minus - 2.0 * a0;
      rep.worst_second_diff = std::min(rep.worst_second_diff, second);
      if (second < -tol) {
        ++rep.second_order_failures;
        failed = true;
      }
    }
    if (failed) rep.failing_seeds.push_back(seed + 0x9e3779b9u * static_cast<unsigned>(trial + 1));
  }
  rep.pass = rep.first_order_failures == 0 && rep.second_order_failures == 0;
  return rep;
}

BoundaryVerdict boundary_curvature_verdict(const DomainSpec& spec, const std::string& arc_id,
                                           ProblemKind kind, int samples, double tol) {
  const Arc* arc = nullptr;
  for (const auto& a : spec.arcs)
    if (a.id == arc_id) arc = &a;
  if (!arc) throw DomainError("boundary_curvature_verdict: unknown arc " + arc_id);
  if (arc->kind == ArcKind::C)
    throw UnsupportedError(
        "boundary_curvature_verdict: the theorem constrains only blow-up (A/B) arcs");

  BoundaryVerdict v;
  v.arc_id = arc_id;
  v.samples = samples;
  switch (kind.type) {
    case ProblemType::minimal:
    case ProblemType::translator:
      v.expected = 0.0;
      break;
    case ProblemType::cmc:
      v.expected = arc->kind == ArcKind::A ? kind.H0 : -kind.H0;
      break;
  }
  for (int s = 1; s < samples; ++s) {
    const double t = static_cast<double>(s) / samples;
    const double kappa = arc->sigma_curvature_left(spec.metric, t);
    v.max_deviation = std::max(v.max_deviation, std::abs(kappa - v.expected));
  }
  v.pass = v.max_deviation <= tol;
  return v;
}

double cylinder_weighted_H(double kappa_sigma, double t, double c, int m) {
  return std::exp(-c * t / m) * kappa_sigma;
}

namespace {

struct Tri3 {
  Vec3 a, b, c;
};

Vec3 to3(Vec2 p, double z) { return {p.x, p.y, z}; }

Vec3 mid3(const Vec3& p, const Vec3& q) {
  return {(p.x + q.x) / 2, (p.y + q.y) / 2, (p.z + q.z) / 2};
}

double area3(const Tri3& t) {
  const double ux = t.b.x - t.a.x, uy = t.b.y - t.a.y, uz = t.b.z - t.a.z;
  const double vx = t.c.x - t.a.x, vy = t.c.y - t.a.y, vz = t.c.z - t.a.z;
  const double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

double dist3(const Vec3& p, const Vec3& q) {
  return std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) +
                   (p.z - q.z) * (p.z - q.z));
}

// area of the triangle piece inside the ball, by recursive 4-split sampling
double clipped_area(const Tri3& t, const Vec3& center, double r, int depth) {
  const Vec3 centroid{(t.a.x + t.b.x + t.c.x) / 3, (t.a.y + t.b.y + t.c.y) / 3,
                      (t.a.z + t.b.z + t.c.z) / 3};
  const double diam = std::max({dist3(t.a, t.b), dist3(t.b, t.c), dist3(t.c, t.a)});
  const double d = dist3(centroid, center);
  if (d - diam > r) return 0.0;           // fully outside
  if (d + diam < r) return area3(t);      // fully inside
  if (depth <= 0) return d <= r ? area3(t) : 0.0;
  const Vec3 mab = mid3(t.a, t.b), mbc = mid3(t.b, t.c), mca = mid3(t.c, t.a);
  return clipped_area({t.a, mab, mca}, center, r, depth - 1) +
         clipped_area({mab, t.b, mbc}, center, r, depth - 1) +
         clipped_area({mca, mbc, t.c}, center, r, depth - 1) +
         clipped_area({mab, mbc, mca}, center, r, depth - 1);
}

}  // namespace

EntropyReport entropy_ratio(const GraphSurface& surface, const std::vector<Vec3>& centers,
                            const std::vector<double>& radii) {
  if (!surface.metric->is_euclidean())
    throw UnsupportedError("entropy_ratio: defined for the euclidean metric");
  for (const double r : radii)
    if (!(r > 0)) throw DomainError("entropy_ratio: radii must be positive");

  EntropyReport rep;
  for (size_t ci = 0; ci < centers.size(); ++ci) {
    for (const double r : radii) {
      double area = 0.0;
      for (const auto& t : surface.mesh->triangles) {
        const Tri3 tri{to3(surface.mesh->vertices[t[0]], surface.heights[t[0]]),
                       to3(surface.mesh->vertices[t[1]], surface.heights[t[1]]),
                       to3(surface.mesh->vertices[t[2]], surface.heights[t[2]])};
        area += clipped_area(tri, centers[ci], r, 5);
      }
      const double ratio = area / (r * r);
      if (ratio > rep.sup_ratio) {
        rep.sup_ratio = ratio;
        rep.argmax_center = static_cast<int>(ci);
        rep.argmax_radius = r;
      }
    }
  }
  return rep;
}

}  // namespace jsgraph
