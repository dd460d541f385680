#include <cmath>
#include <numbers>

#include "doctest.h"
#include "karamata/operator.hpp"
#include "oracles.hpp"

using namespace karamata;

namespace {

bool close(double got, double want, double rel, double abs = 0.0) {
  return std::abs(got - want) <= std::max(abs, rel * std::abs(want));
}

}  // namespace

TEST_CASE("constants are fixed points") {
  for (double c : {-3.0, 0.0, 5.0})
    for (double x : {2.0, 10.0, 1e3, 1e6}) CHECK(std::abs(apply_L(Expr::constant(c), x) - c) <= 1e-12);
  CHECK(apply_L(parse("5"), 100.0) == doctest::Approx(5.0));
}

TEST_CASE("known images") {
  CHECK(close(apply_L(parse("ln(x)"), std::exp(2.0)), 1.0, 1e-12));
  const double x = 1e6;
  CHECK(close(apply_L(parse("sin(x)"), x),
              (oracle::sine_integral(x) - oracle::sine_integral(1.0)) / std::log(x), 1e-9, 1e-12));
  CHECK(close(apply_L(parse("1/(1+ln(x))"), 1e8), std::log1p(std::log(1e8)) / std::log(1e8), 1e-10));
}

TEST_CASE("behaviour at and below one") {
  CHECK(apply_L(parse("x + 2"), 1.0) == 3.0);
  CHECK(apply_L(parse("x + 2"), 1.0 + 1e-9) == 3.0);
  CHECK_THROWS_AS(apply_L(parse("x"), 0.5), PreconditionError);
}

TEST_CASE("inverse closed form") {
  CHECK(format(invert_L(parse("ln(x)"))) == "2 * ln(x)");
  CHECK(invert_L(parse("7")).is_literal(7.0));
  for (const char* text : {"ln(x)", "ln(x)^2", "sqrt(ln(x))", "ln(ln(x) + 1)", "ln(x) + 3"}) {
    const Expr f = parse(text);
    const Expr g = invert_L(f);
    for (double x : {10.0, 1e3, 1e6}) {
      CAPTURE(text);
      CAPTURE(x);
      CHECK(close(apply_L(g, x), eval(f, Env{{"x", x}}), 1e-8));
    }
  }
  // the other composition: invert_L(L h) = h for h = ln t, where L h = ln x / 2
  const Expr back = invert_L(parse("ln(x)/2"));
  for (double x : {3.0, 50.0, 1e4}) CHECK(close(eval(back, Env{{"x", x}}), std::log(x), 1e-14));
}

TEST_CASE("linearity") {
  const Expr h1 = parse("sin(x)"), h2 = parse("ln(x)");
  const Expr mix = parse("2*sin(x) - 3*ln(x)");
  for (double x : {10.0, 1e3, 1e5}) {
    const double lhs = apply_L(mix, x);
    const double rhs = 2 * apply_L(h1, x) - 3 * apply_L(h2, x);
    CHECK(close(lhs, rhs, 1e-9, 1e-9));
  }
}

TEST_CASE("grid evaluation matches pointwise evaluation") {
  const auto grid = GeometricGrid::geometric(10.0, 1.8, 20);
  const auto samples = apply_L_grid(parse("sin(x)"), grid);
  REQUIRE(samples.size() == 20);
  for (const Sample& s : samples) {
    CAPTURE(s.x);
    CHECK(close(s.value, apply_L(parse("sin(x)"), s.x), 1e-9, 1e-11));
  }
  const double pts[] = {1.0, 5.0, 5.0, 20.0};
  const auto mixed = apply_L_points(parse("x"), pts);
  CHECK(mixed[0].value == 1.0);
  CHECK(close(mixed[1].value, 4.0 / std::log(5.0), 1e-12));
  CHECK(mixed[1].value == mixed[2].value);
  const double descending[] = {5.0, 2.0};
  CHECK_THROWS_AS(apply_L_points(parse("x"), descending), PreconditionError);
}

TEST_CASE("bounds and limits carry over") {
  // h in [1, 3] keeps L(h) in [1, 3]
  const auto samples = apply_L_grid(parse("2 + sin(x)"), GeometricGrid::geometric(2.0, 2.5, 15));
  for (const Sample& s : samples) {
    CHECK(s.value >= 1.0);
    CHECK(s.value <= 3.0);
  }
  // h -> 4 gives L(h) = 4 + (1 - 1/x) / ln x, approaching 4 at rate 1/ln x
  const auto tail = apply_L_grid(parse("4 + 1/x"), GeometricGrid::geometric(10.0, 10.0, 8));
  for (const Sample& s : tail) CHECK(close(s.value, 4.0 + (1.0 - 1.0 / s.x) / std::log(s.x), 1e-12));
  CHECK(tail.back().value < tail.front().value);
}
