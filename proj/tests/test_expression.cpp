#include <doctest.h>

#include <cmath>

#include "bdsim/expression.hpp"

using namespace bdsim;

static double ev(const std::string& text, std::vector<double> v = {},
                 std::vector<std::string> names = {}) {
  auto e = Expression::parse(text, names);
  return e.eval(v.data(), static_cast<int>(v.size()));
}

TEST_CASE("arithmetic and precedence") {
  CHECK(ev("2+3*4") == doctest::Approx(14));
  CHECK(ev("(2+3)*4") == doctest::Approx(20));
  CHECK(ev("1+2*3^2") == doctest::Approx(19));
  CHECK(ev("2^3^2") == doctest::Approx(512));  // right associative
  CHECK(ev("7/2/2") == doctest::Approx(1.75));
  CHECK(ev("-3^2") == doctest::Approx(-9));
  CHECK(ev("1e-3 + 2.5e2") == doctest::Approx(250.001));
}

TEST_CASE("variables and functions") {
  CHECK(ev("2*x1 + 1", {3.0}, {"x1"}) == doctest::Approx(7));
  CHECK(ev("x1*x2 - x2", {2.0, 5.0}, {"x1", "x2"}) == doctest::Approx(5));
  CHECK(ev("sin(pi/2)") == doctest::Approx(1.0));
  CHECK(ev("exp(-(u*u+v*v))", {0.5, 0.5}, {"u", "v"}) == doctest::Approx(std::exp(-0.5)));
  CHECK(ev("sqrt(cos(0))") == doctest::Approx(1.0));
  CHECK(ev("4/(1+x1*x1+x2*x2)^2", {1.0, 1.0}, {"x1", "x2"}) == doctest::Approx(4.0 / 9.0));
}

TEST_CASE("parse errors are structural") {
  CHECK_THROWS_AS(Expression::parse("2*+3", {}), StructuralError);
  CHECK_THROWS_AS(Expression::parse("2*(3", {}), StructuralError);
  CHECK_THROWS_AS(Expression::parse("frob(1)", {}), StructuralError);
  CHECK_THROWS_AS(Expression::parse("x1+1", {}), StructuralError);
  CHECK_THROWS_AS(Expression::parse("1 2", {}), StructuralError);
  CHECK_THROWS_AS(Expression::parse("", {}), StructuralError);
}

TEST_CASE("constant helper and determinism") {
  auto e = Expression::constant(0.45);
  CHECK(e.eval(nullptr, 0) == 0.45);
  auto f = Expression::parse("x1^2 - 0.5*x1 + tanh(x1)", {"x1"});
  double a = f.eval(std::vector<double>{0.7}.data(), 1);
  double b = f.eval(std::vector<double>{0.7}.data(), 1);
  CHECK(a == b);
}
