#include "jsgraph/oracles.hpp"

#include <cmath>

#include "jsgraph/errors.hpp"

namespace jsgraph {

double scherk(double x, double y) {
  if (std::abs(x) >= M_PI / 2 || std::abs(y) >= M_PI / 2)
    throw DomainError("scherk: point outside (-pi/2,pi/2)^2");
  return std::log(std::cos(x)) - std::log(std::cos(y));
}

OracleField scherk_field() {
  OracleField f;
  f.name = "scherk";
  f.value = [](double x, double y) { return scherk(x, y); };
  f.gradient = [](double x, double y) { return Vec2{-std::tan(x), std::tan(y)}; };
  f.in_domain = [](double x, double y) {
    return std::abs(x) < M_PI / 2 && std::abs(y) < M_PI / 2;
  };
  return f;
}

double grim_reaper(double x, double c) {
  if (std::abs(c * x) >= M_PI / 2) throw DomainError("grim_reaper: |c x| >= pi/2");
  return -std::log(std::cos(c * x)) / c;
}

OracleField grim_reaper_field(double c) {
  OracleField f;
  f.name = "grim_reaper";
  f.value = [c](double x, double) { return grim_reaper(x, c); };
  f.gradient = [c](double x, double) { return Vec2{std::tan(c * x), 0.0}; };
  f.in_domain = [c](double x, double) { return std::abs(c * x) < M_PI / 2; };
  return f;
}

double spherical_cap(double x, double y, double R) {
  const double d = R * R - x * x - y * y;
  if (d <= 0.0) throw DomainError("spherical_cap: point outside the disk of radius R");
  return -std::sqrt(d);
}

OracleField spherical_cap_field(double R) {
  OracleField f;
  f.name = "spherical_cap";
  f.value = [R](double x, double y) { return spherical_cap(x, y, R); };
  f.gradient = [R](double x, double y) {
    const double s = std::sqrt(R * R - x * x - y * y);
    return Vec2{x / s, y / s};
  };
  f.in_domain = [R](double x, double y) { return x * x + y * y < R * R; };
  return f;
}

namespace {

Vec2 flux(const OracleField& field, const ConformalMetric& metric, Vec2 p) {
  const Vec2 g = field.gradient(p.x, p.y);
  const double lam = metric.lambda(p);
  const double w = std::sqrt(1.0 + norm2(g) / (lam * lam));
  return g / w;
}

}  // namespace

double fd_divergence(const OracleField& field, const ConformalMetric& metric, Vec2 p,
                     double h) {
  for (const Vec2 q : {Vec2{p.x + 2 * h, p.y}, Vec2{p.x - 2 * h, p.y},
                       Vec2{p.x, p.y + 2 * h}, Vec2{p.x, p.y - 2 * h}})
    if (!field.in_domain(q.x, q.y))
      throw DomainError("fd_divergence: stencil leaves the field domain");
  const double div_e = (flux(field, metric, {p.x + h, p.y}).x -
                        flux(field, metric, {p.x - h, p.y}).x) / (2 * h) +
                       (flux(field, metric, {p.x, p.y + h}).y -
                        flux(field, metric, {p.x, p.y - h}).y) / (2 * h);
  const double lam = metric.lambda(p);
  return div_e / (lam * lam);
}

double fd_divergence_values(const std::function<double(double, double)>& value,
                            const ConformalMetric& metric, Vec2 p, double h) {
  OracleField f;
  f.value = value;
  f.gradient = [&value, h](double x, double y) {
    return Vec2{(value(x + h, y) - value(x - h, y)) / (2 * h),
                (value(x, y + h) - value(x, y - h)) / (2 * h)};
  };
  f.in_domain = [](double, double) { return true; };
  return fd_divergence(f, metric, p, h);
}

double OdeProfile::eval(double x) const {
  if (t.empty()) throw NumericError("OdeProfile: empty");
  if (x <= t.front()) return u.front();
  if (x >= t.back()) return u.back();
  const size_t n = t.size();
  const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
  size_t i = std::min(n - 2, static_cast<size_t>((x - t.front()) / dt));
  while (i + 1 < n && t[i + 1] < x) ++i;
  while (i > 0 && t[i] > x) --i;
  const double s = (x - t[i]) / (t[i + 1] - t[i]);
  return u[i] * (1 - s) + u[i + 1] * s;
}

namespace {

// RHS for the first-order system (u, p = u')
struct OdeRhs {
  OdeKind kind;
  double param;  // c for translator, H for cmc_radial

  double dp(double r, double p) const {
    switch (kind) {
      case OdeKind::minimal:
        return 0.0;
      case OdeKind::translator:
        return param * (1.0 + p * p);
      case OdeKind::cmc_radial: {
        const double w2 = 1.0 + p * p;
        const double w = std::sqrt(w2);
        if (r == 0.0) return 0.5 * param;  // regular center: u'' = H/2
        return param * w2 * w - p * w2 / r;
      }
    }
    return 0.0;
  }
};

OdeProfile integrate(const OdeRhs& rhs, double a, double b, double u0, double p0, int steps) {
  OdeProfile prof;
  prof.t.resize(steps + 1);
  prof.u.resize(steps + 1);
  const double dt = (b - a) / steps;
  double u = u0, p = p0;
  prof.t[0] = a;
  prof.u[0] = u;
  for (int i = 0; i < steps; ++i) {
    const double r = a + i * dt;
    const double k1u = p, k1p = rhs.dp(r, p);
    const double k2u = p + 0.5 * dt * k1p, k2p = rhs.dp(r + 0.5 * dt, p + 0.5 * dt * k1p);
    const double k3u = p + 0.5 * dt * k2p, k3p = rhs.dp(r + 0.5 * dt, p + 0.5 * dt * k2p);
    const double k4u = p + dt * k3p, k4p = rhs.dp(r + dt, p + dt * k3p);
    u += dt / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    p += dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    prof.t[i + 1] = a + (i + 1) * dt;
    prof.u[i + 1] = u;
    if (!std::isfinite(u) || !std::isfinite(p)) {
      prof.u[i + 1] = std::copysign(1e300, u);
      for (int j = i + 2; j <= steps; ++j) {
        prof.t[j] = a + j * dt;
        prof.u[j] = prof.u[i + 1];
      }
      return prof;
    }
  }
  return prof;
}

}  // namespace

OdeProfile ode_shoot(OdeKind kind, double param, double a, double b, double ua, double ub,
                     int steps) {
  const OdeRhs rhs{kind, param};
  if (kind == OdeKind::cmc_radial) {
    // shoot on u(0) with u'(0) = 0 and match u(b) = ub
    auto endval = [&](double u0) { return integrate(rhs, a, b, u0, 0.0, steps).u.back(); };
    double lo = ub - 10.0 * std::abs(param) * b * b - 10.0, hi = ub + 10.0;
    if ((endval(lo) - ub) * (endval(hi) - ub) > 0)
      throw NumericError("ode_shoot: bracket failure for cmc_radial shooting on u(0)");
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((endval(mid) - ub) * (endval(lo) - ub) <= 0) hi = mid;
      else lo = mid;
    }
    return integrate(rhs, a, b, 0.5 * (lo + hi), 0.0, steps);
  }

  // shoot on the left slope
  auto endval = [&](double slope) { return integrate(rhs, a, b, ua, slope, steps).u.back(); };
  double lo = -1.0, hi = 1.0;
  // grow the bracket; translator profiles blow up, so cap the growth
  for (int grow = 0; grow < 60 && (endval(lo) - ub) * (endval(hi) - ub) > 0; ++grow) {
    lo = lo * 2.0;
    hi = hi * 2.0;
    if (!std::isfinite(endval(lo)) && !std::isfinite(endval(hi)))
      throw NumericError("ode_shoot: bracket failure (both ends blow up), interval [" +
                         std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  if ((endval(lo) - ub) * (endval(hi) - ub) > 0)
    throw NumericError("ode_shoot: no sign change in slope bracket [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((endval(mid) - ub) * (endval(lo) - ub) <= 0) hi = mid;
    else lo = mid;
  }
  return integrate(rhs, a, b, ua, 0.5 * (lo + hi), steps);
}

}  // namespace jsgraph
