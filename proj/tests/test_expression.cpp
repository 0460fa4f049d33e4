#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cgvf/expression.hpp"

using namespace cgvf;
using doctest::Approx;

TEST_CASE("arithmetic and precedence") {
  auto e = Expression::parse("1 + 2*3 - 4/2", {});
  CHECK(e.eval({}) == Approx(5.0));
  CHECK(Expression::parse("2^3^1", {}).eval({}) == Approx(8.0));
  CHECK(Expression::parse("-3 + 1", {}).eval({}) == Approx(-2.0));
  CHECK(Expression::parse("2*(1+1)", {}).eval({}) == Approx(4.0));
  CHECK(Expression::parse("pi", {}).eval({}) == Approx(M_PI));
  CHECK(Expression::parse("1e-3 + 2E2", {}).eval({}) == Approx(200.001));
}

TEST_CASE("functions and variables") {
  auto e = Expression::parse("15*sin(2*w)", {"w"});
  for (double w : {0.0, 0.3, -1.7, 2.9}) {
    CHECK(e.eval({w}) == Approx(15.0 * std::sin(2.0 * w)));
  }
  auto s = Expression::parse("sqrt(0.5*(1 - 0.5*sin(w)^2))", {"w"});
  CHECK(s.eval({0.7}) ==
        Approx(std::sqrt(0.5 * (1.0 - 0.5 * std::pow(std::sin(0.7), 2)))));
  auto two = Expression::parse("cos(w1)*sin(w2)", {"w1", "w2"});
  CHECK(two.eval({0.4, 1.1}) == Approx(std::cos(0.4) * std::sin(1.1)));
}

TEST_CASE("parse errors carry position info") {
  CHECK_THROWS_AS(Expression::parse("1 +", {}), ParseError);
  CHECK_THROWS_AS(Expression::parse("sin 3", {}), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(3)", {}), ParseError);
  CHECK_THROWS_AS(Expression::parse("w", {}), ParseError);  // unknown variable
  CHECK_THROWS_AS(Expression::parse("2 ^ w", {"w"}), ParseError);  // non-const exponent
  CHECK_THROWS_AS(Expression::parse("(1+2", {}), ParseError);
  try {
    Expression::parse("1 + $", {});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.column() == 5);
  }
}

TEST_CASE("derivatives match finite differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const std::vector<std::string> exprs = {
      "15*sin(2*w)",
      "30*sin(w)*sqrt(0.5*(1-0.5*sin(w)^2))",
      "5 + 5*cos(2*w) - 2",
      "w^3 - 2*w + 1/(w + 10)",
      "cos(2*w + pi/2)",
  };
  const double h = 1e-6;
  for (const std::string& text : exprs) {
    auto f = Expression::parse(text, {"w"});
    auto df = f.derivative(0);
    auto ddf = df.derivative(0);
    for (int trial = 0; trial < 20; ++trial) {
      const double w = uni(rng);
      const double fd1 = (f.eval({w + h}) - f.eval({w - h})) / (2 * h);
      const double fd2 = (df.eval({w + h}) - df.eval({w - h})) / (2 * h);
      CHECK(df.eval({w}) == Approx(fd1).epsilon(1e-6).scale(1.0));
      CHECK(ddf.eval({w}) == Approx(fd2).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("two-variable partial derivatives") {
  auto f = Expression::parse("(2 + cos(w1))*cos(w2)", {"w1", "w2"});
  auto d1 = f.derivative(0);
  auto d2 = f.derivative(1);
  auto d12 = d1.derivative(1);
  auto d21 = d2.derivative(0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = uni(rng), b = uni(rng);
    CHECK(d1.eval({a, b}) == Approx(-std::sin(a) * std::cos(b)));
    CHECK(d2.eval({a, b}) == Approx(-(2 + std::cos(a)) * std::sin(b)));
    // mixed partials agree regardless of differentiation order
    CHECK(d12.eval({a, b}) == Approx(d21.eval({a, b})));
  }
}

TEST_CASE("linear expressions differentiate exactly") {
  auto f = Expression::parse("2*w - 7", {"w"});
  auto df = f.derivative(0);
  auto ddf = df.derivative(0);
  CHECK(df.eval({123.456}) == 2.0);
  CHECK(ddf.eval({-9.0}) == 0.0);
}
