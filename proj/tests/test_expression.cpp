#include <doctest.h>

#include <cmath>
#include <random>

#include "jsgraph/errors.hpp"
#include "jsgraph/expression.hpp"

using jsgraph::Expression;

TEST_CASE("expression: parse and evaluate") {
  CHECK(Expression::parse("1+2*3").eval(0, 0) == doctest::Approx(7.0));
  CHECK(Expression::parse("2^3^2").eval(0, 0) == doctest::Approx(512.0));  // right assoc
  CHECK(Expression::parse("-x^2+y").eval(3, 1) == doctest::Approx(-8.0));
  CHECK(Expression::parse("log(cos(x))-log(cos(y))").eval(1.0, 0.0) ==
        doctest::Approx(std::log(std::cos(1.0))));
  CHECK(Expression::parse("sqrt(x*x+y*y)").eval(3, 4) == doctest::Approx(5.0));
  CHECK(Expression::parse("2/(1-(x^2+y^2))").eval(0.5, 0.0) == doctest::Approx(8.0 / 3.0));
  CHECK(Expression::parse("pi").eval(0, 0) == doctest::Approx(M_PI));
  CHECK(Expression::parse("exp(1)").eval(0, 0) == doctest::Approx(M_E));
}

TEST_CASE("expression: deterministic re-evaluation is bit identical") {
  auto e = Expression::parse("exp(sin(x*y)) - sqrt(x+2)/cos(y)");
  const double a = e.eval(0.37, -1.21);
  for (int i = 0; i < 10; ++i) CHECK(e.eval(0.37, -1.21) == a);
  auto e2 = Expression::parse("exp(sin(x*y)) - sqrt(x+2)/cos(y)");
  CHECK(e2.eval(0.37, -1.21) == a);
}

TEST_CASE("expression: parse errors") {
  CHECK_THROWS_AS(Expression::parse("2*"), jsgraph::ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(3)"), jsgraph::ParseError);
  CHECK_THROWS_AS(Expression::parse("z+1"), jsgraph::ParseError);
  CHECK_THROWS_AS(Expression::parse("(x+1"), jsgraph::ParseError);
  CHECK_THROWS_AS(Expression::parse("x 1"), jsgraph::ParseError);
}

TEST_CASE("expression: symbolic derivative matches central differences") {
  const char* exprs[] = {
      "x^2*y - y^3",
      "exp(x)*cos(y) + log(2+x)",
      "sqrt(1+x^2+y^2)",
      "sin(x*y)/(2+cos(x))",
      "2^x + x^y",
  };
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pick(0.2, 1.3);
  for (const char* s : exprs) {
    auto f = Expression::parse(s);
    auto fx = f.derivative('x');
    auto fy = f.derivative('y');
    for (int i = 0; i < 20; ++i) {
      const double x = pick(rng), y = pick(rng), h = 1e-6;
      const double dx_fd = (f.eval(x + h, y) - f.eval(x - h, y)) / (2 * h);
      const double dy_fd = (f.eval(x, y + h) - f.eval(x, y - h)) / (2 * h);
      CHECK(fx.eval(x, y) == doctest::Approx(dx_fd).epsilon(1e-6));
      CHECK(fy.eval(x, y) == doctest::Approx(dy_fd).epsilon(1e-6));
    }
  }
}
