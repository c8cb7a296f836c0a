#include <doctest.h>

#include <cmath>
#include <vector>

#include "jsgraph/errors.hpp"
#include "jsgraph/metric.hpp"

using namespace jsgraph;

namespace {

// independent high-order 1D quadrature (composite 3-point Gauss) of f over [a,b]
double quad1d(const std::function<double(double)>& f, double a, double b, int panels) {
  static const double gx[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
  static const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double s = 0.0;
  const double dt = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    for (int g = 0; g < 3; ++g) s += gw[g] * f(a + (p + gx[g]) * dt) * dt;
  return s;
}

// independent 2D quadrature of lambda^2 over the Euclidean disk r <= rmax (polar panels)
double disk_area_oracle(const ConformalMetric& m, double rmax) {
  auto once = [&](int nr, int nt) {
    static const double gx[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
    static const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    double s = 0.0;
    const double dr = rmax / nr, dt = 2.0 * M_PI / nt;
    for (int i = 0; i < nr; ++i)
      for (int gi = 0; gi < 3; ++gi) {
        const double r = (i + gx[gi]) * dr;
        for (int j = 0; j < nt; ++j)
          for (int gj = 0; gj < 3; ++gj) {
            const double th = (j + gx[gj]) * dt;
            const double lam = m.lambda({r * std::cos(th), r * std::sin(th)});
            s += gw[gi] * gw[gj] * lam * lam * r * dr * dt;
          }
      }
    return s;
  };
  double prev = once(16, 8), cur = once(32, 16);
  for (int round = 0; round < 4 && std::abs(cur - prev) > 1e-11 * std::abs(cur); ++round) {
    prev = cur;
    cur = once(64 << round, 32 << round);
  }
  return cur;
}

std::vector<Vec2> circle_polyline(Vec2 c, double r, int n) {
  std::vector<Vec2> pts;
  pts.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    pts.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return pts;  // closed: last == first
}

// First variation of metric_length under the unit outward normal flow of a
// centered circle: dL/da = -integral kappa <V, nu> dsigma. With lambda constant
// on the circle this gives kappa(outward) = -(dL/da) / (lambda * L_sigma).
double curvature_first_variation_oracle(Vec2 center, double a, const ConformalMetric& m,
                                        int n, double t) {
  auto length_at = [&](double radius) {
    return metric_length(circle_polyline(center, radius, n), m);
  };
  const double dL = (length_at(a + t) - length_at(a - t)) / (2.0 * t);
  const double lam = m.lambda({center.x + a, center.y});
  return -dL / (lam * length_at(a));
}

}  // namespace

TEST_CASE("metric_length: unit segment and square perimeter are exact (euclidean)") {
  const auto eu = ConformalMetric::euclidean();
  const std::vector<Vec2> seg = {{0, 0}, {1, 0}};
  CHECK(metric_length(seg, eu) == 1.0);
  const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  CHECK(metric_length(square, eu) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("metric_length: hyperbolic radius via quadrature oracle") {
  const auto hyp = ConformalMetric::poincare_disk(1.0);
  const double oracle = quad1d([](double t) { return 2.0 / (1.0 - t * t); }, 0.0, 0.5, 256);
  CHECK(oracle == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-12));

  const std::vector<Vec2> seg = {{0, 0}, {0.5, 0}};
  CHECK(metric_length(seg, hyp) == doctest::Approx(oracle).epsilon(1e-4));

  // refinement convergence: subdivided polylines approach the oracle
  auto subdivided = [](int n) {
    std::vector<Vec2> pts;
    for (int i = 0; i <= n; ++i) pts.push_back({0.5 * i / n, 0.0});
    return pts;
  };
  const double e1 = std::abs(metric_length(subdivided(1), hyp) - oracle);
  const double e4 = std::abs(metric_length(subdivided(4), hyp) - oracle);
  const double e16 = std::abs(metric_length(subdivided(16), hyp) - oracle);
  CHECK(e4 < e1);
  CHECK(e16 < e4);
  CHECK(std::abs(metric_length(subdivided(64), hyp) - oracle) < 1e-10);
}

TEST_CASE("metric_length: additive under concatenation, domain error outside disk") {
  const auto hyp = ConformalMetric::poincare_disk(1.0);
  const std::vector<Vec2> whole = {{-0.3, 0.1}, {0.2, 0.2}, {0.5, -0.1}};
  const std::vector<Vec2> a = {{-0.3, 0.1}, {0.2, 0.2}};
  const std::vector<Vec2> b = {{0.2, 0.2}, {0.5, -0.1}};
  CHECK(metric_length(whole, hyp) ==
        doctest::Approx(metric_length(a, hyp) + metric_length(b, hyp)).epsilon(1e-15));

  const std::vector<Vec2> out = {{0, 0}, {1.5, 0}};
  CHECK_THROWS_AS(metric_length(out, hyp), DomainError);
  const std::vector<Vec2> one = {{0, 0}};
  CHECK_THROWS_AS(metric_length(one, hyp), DegenerateInputError);
}

TEST_CASE("metric_area: unit square and empty region") {
  const auto eu = ConformalMetric::euclidean();
  const std::vector<Triangle2> tris = {{{0, 0}, {1, 0}, {1, 1}}, {{0, 0}, {1, 1}, {0, 1}}};
  CHECK(metric_area(tris, eu) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(metric_area({}, eu) == 0.0);
  const std::vector<Triangle2> degen = {{{0, 0}, {1, 0}, {2, 0}}};
  CHECK_THROWS_AS(metric_area(degen, eu), DegenerateInputError);
}

TEST_CASE("metric_area: hyperbolic disk of Euclidean radius 1/2 vs 2D quadrature oracle") {
  const auto hyp = ConformalMetric::poincare_disk(1.0);
  const double oracle = disk_area_oracle(hyp, 0.5);
  CHECK(oracle == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-9));

  auto fan = [](int n) {
    std::vector<Triangle2> tris;
    for (int i = 0; i < n; ++i) {
      const double a0 = 2.0 * M_PI * i / n, a1 = 2.0 * M_PI * (i + 1) / n;
      tris.push_back({{0, 0},
                      {0.5 * std::cos(a0), 0.5 * std::sin(a0)},
                      {0.5 * std::cos(a1), 0.5 * std::sin(a1)}});
    }
    return tris;
  };
  const double coarse = metric_area_adaptive(fan(64), hyp, 1e-8, 8);
  const double fine = metric_area_adaptive(fan(512), hyp, 1e-8, 8);
  CHECK(std::abs(fine - oracle) < std::abs(coarse - oracle));
  CHECK(fine == doctest::Approx(oracle).epsilon(2e-4));  // inscribed-polygon deficit remains
}

TEST_CASE("geodesic_curvature: circle, straight line, hyperbolic diameter") {
  const auto eu = ConformalMetric::euclidean();
  const int n = 512;
  const auto circ = circle_polyline({0, 0}, 2.0, n);
  const double h = 2.0 * M_PI * 2.0 / n;
  // CCW traversal: left normal is inward
  CHECK(std::abs(geodesic_curvature(circ, eu, n / 3, CurveSide::left) - 0.5) < 10 * h * h);
  // right side flips the sign
  CHECK(std::abs(geodesic_curvature(circ, eu, n / 3, CurveSide::right) + 0.5) < 10 * h * h);

  const std::vector<Vec2> seg = {{0, 0}, {0.25, 0.5}, {0.5, 1.0}, {0.75, 1.5}};
  CHECK(geodesic_curvature(seg, eu, 1, CurveSide::left) == 0.0);
  CHECK(geodesic_curvature(seg, eu, 2, CurveSide::right) == 0.0);

  // a diameter is a hyperbolic geodesic
  const auto hyp = ConformalMetric::poincare_disk(1.0);
  std::vector<Vec2> diam;
  for (int i = 0; i <= 64; ++i) diam.push_back({-0.9 + 1.8 * i / 64.0, 0.0});
  CHECK(std::abs(geodesic_curvature(diam, hyp, 32, CurveSide::left)) < 1e-12);

  const std::vector<Vec2> coincident = {{0, 0}, {0, 0}, {1, 0}};
  CHECK_THROWS_AS(geodesic_curvature(coincident, eu, 1, CurveSide::left),
                  DegenerateInputError);
}

TEST_CASE("geodesic_curvature: hyperbolic circle closed form and first-variation oracle") {
  const auto hyp = ConformalMetric::poincare_disk(1.0);
  const double a = 0.5;  // Euclidean radius of the circle
  const int n = 4096;
  auto circ = circle_polyline({0, 0}, a, n);
  const double expected = (1.0 + a * a) / (2.0 * a);  // coth of the hyperbolic radius
  const int i = n / 4;
  const double computed = geodesic_curvature(circ, hyp, i, CurveSide::left);
  CHECK(computed == doctest::Approx(expected).epsilon(1e-6));

  // kappa_sigma agrees with the centered FD first variation of metric_length;
  // the outward normal flips the sign
  for (const double t : {3e-2, 1e-2}) {
    const double fd = curvature_first_variation_oracle({0, 0}, a, hyp, n, t);
    const double k_out = geodesic_curvature(circ, hyp, i, CurveSide::right);
    CHECK(std::abs(k_out - fd) / std::abs(k_out) < 10.0 * t * t);
  }

  // euclidean circle too
  const auto eu = ConformalMetric::euclidean();
  auto circ_e = circle_polyline({0, 0}, 2.0, n);
  const double k_e = geodesic_curvature(circ_e, eu, i, CurveSide::right);
  for (const double t : {3e-2, 1e-2}) {
    const double fd = curvature_first_variation_oracle({0, 0}, 2.0, eu, n, t);
    CHECK(std::abs(k_e - fd) / std::abs(k_e) < 10.0 * t * t);
  }
}

TEST_CASE("custom metric: expression lambda with symbolic dlog") {
  const auto m = ConformalMetric::custom("exp(x*y)");
  CHECK(m.lambda({0.3, 0.7}) == doctest::Approx(std::exp(0.21)));
  const Vec2 g = m.dlog_lambda({0.3, 0.7});
  CHECK(g.x == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(g.y == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(ConformalMetric::custom("x -"), ParseError);

  const auto neg = ConformalMetric::custom("x");
  CHECK_THROWS_AS(neg.lambda({-1.0, 0.0}), DomainError);
}

TEST_CASE("custom metric: poincare factor as an expression matches the built-in") {
  const auto builtin = ConformalMetric::poincare_disk(1.0);
  const auto custom = ConformalMetric::custom("2/(1-x^2-y^2)");
  for (const Vec2 p : {Vec2{0.1, 0.2}, Vec2{-0.5, 0.3}, Vec2{0.0, -0.8}}) {
    CHECK(custom.lambda(p) == doctest::Approx(builtin.lambda(p)).epsilon(1e-14));
    const Vec2 g1 = custom.dlog_lambda(p), g2 = builtin.dlog_lambda(p);
    CHECK(g1.x == doctest::Approx(g2.x).epsilon(1e-12));
    CHECK(g1.y == doctest::Approx(g2.y).epsilon(1e-12));
  }
  // lengths through both paths agree
  std::vector<Vec2> seg;
  for (int i = 0; i <= 32; ++i) seg.push_back({0.7 * i / 32.0, 0.1});
  CHECK(metric_length(seg, custom) ==
        doctest::Approx(metric_length(seg, builtin)).epsilon(1e-14));
}
