#pragma once

#include <functional>
#include <vector>

#include "jsgraph/geometry.hpp"
#include "jsgraph/metric.hpp"

namespace jsgraph {

/// Closed-form reference field with exact gradient and validity domain.
struct OracleField {
  std::function<double(double, double)> value;
  std::function<Vec2(double, double)> gradient;
  std::function<bool(double, double)> in_domain;
  std::string name;
};

// Scherk: ln(cos x) - ln(cos y) on (-pi/2,pi/2)^2, exact minimal graph
double scherk(double x, double y);
OracleField scherk_field();

// grim reaper: -(1/c) ln cos(c x) on |c x| < pi/2, exact 1D translator
double grim_reaper(double x, double c);
OracleField grim_reaper_field(double c);

// lower spherical cap: -sqrt(R^2 - x^2 - y^2); div(grad u / W) = 2/R
double spherical_cap(double x, double y, double R);
OracleField spherical_cap_field(double R);

/// Central-difference evaluation of the conformal-form divergence
/// (1/lambda^2) div_e(grad_e u / W), W = sqrt(1 + |grad_e u|^2 / lambda^2).
/// The field's own gradient evaluator supplies grad_e u at stencil points.
double fd_divergence(const OracleField& field, const ConformalMetric& metric, Vec2 p,
                     double h);

/// Same, for a field given only by values (gradient via nested central differences).
double fd_divergence_values(const std::function<double(double, double)>& value,
                            const ConformalMetric& metric, Vec2 p, double h);

enum class OdeKind { minimal, translator, cmc_radial };

struct OdeProfile {
  std::vector<double> t;  // grid
  std::vector<double> u;  // values
  double eval(double x) const;  // linear interpolation
};

/// Two-point reference solve by RK4 shooting + bisection.
/// minimal: u'' = 0; translator: u'' = c (1 + u'^2);
/// cmc_radial: u'' = H W^3 - u' W^2 / r on [0, b] with u'(0) = 0 (left value ignored,
/// shooting on u(0)).
OdeProfile ode_shoot(OdeKind kind, double param, double a, double b, double ua, double ub,
                     int steps);

}  // namespace jsgraph
