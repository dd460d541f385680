#include <cmath>
#include <numbers>

#include "doctest.h"
#include "karamata/quad.hpp"
#include "oracles.hpp"

using namespace karamata;

namespace {

bool close(double got, double want, double rel, double abs = 0.0) {
  return std::abs(got - want) <= std::max(abs, rel * std::abs(want));
}

}  // namespace

TEST_CASE("integrals with closed forms") {
  CHECK(close(integrate_log(parse("1"), std::numbers::e).value, 1.0, 1e-12));
  CHECK(close(integrate_log(parse("ln(x)"), std::exp(2.0)).value, 2.0, 1e-12));
  for (double x : {10.0, 1e4, 1e8, 1e12}) {
    const double lx = std::log(x);
    CAPTURE(x);
    CHECK(close(integrate_log(parse("ln(x)"), x).value, lx * lx / 2, 1e-10));
    CHECK(close(integrate_log(parse("1/(1+ln(x))"), x).value, std::log1p(lx), 1e-10));
    CHECK(close(integrate_log(parse("x"), x).value, x - 1, 1e-10));
  }
  CHECK(integrate_log(parse("ln(x)"), 1.0).value == 0.0);
}

TEST_CASE("constants integrate to c ln x") {
  for (double c : {-2.5, 1.0, 3.0})
    for (double x : {1.5, 2.0, 1e3, 1e6, 1e9}) {
      CAPTURE(x);
      CHECK(close(integrate_log(Expr::constant(c), x).value, c * std::log(x), 1e-12));
    }
}

TEST_CASE("sine against the sine-integral oracle") {
  for (double x : {2.0, 50.0, 1e3, 1e6}) {
    const double want = oracle::sine_integral(x) - oracle::sine_integral(1.0);
    const QuadResult r = integrate_log(parse("sin(x)"), x);
    CAPTURE(x);
    CHECK(close(r.value, want, 1e-10, 1e-10));
    CHECK(r.error_estimate >= 0.0);
    CHECK(r.evaluations > 0);
  }
}

TEST_CASE("integral over a range and additivity") {
  const Expr h = parse("sin(ln(x)) + 2");
  const double whole = integrate_log(h, 1e5).value;
  const double split = integrate_log(h, 300.0).value + integrate_log_range(h, 300.0, 1e5).value;
  CHECK(close(whole, split, 1e-10));
  CHECK_THROWS_AS(integrate_log_range(h, 5.0, 2.0), PreconditionError);
}

TEST_CASE("incremental cache") {
  IntegralCache cache(parse("ln(x)"));
  CHECK(cache.frontier() == 1.0);
  CHECK(close(cache.extend(std::numbers::e).value, 0.5, 1e-12));
  CHECK(close(cache.extend(std::exp(2.0)).value, 2.0, 1e-12));
  CHECK(close(cache.extend(std::exp(2.0)).value, 2.0, 1e-12));  // no-op at the frontier
  CHECK_THROWS_AS(cache.extend(2.0), PreconditionError);

  IntegralCache chained(parse("sin(x)"));
  for (double x : {10.0, 1e2, 1e3, 1e4}) chained.extend(x);
  const QuadResult once = integrate_log(parse("sin(x)"), 1e4);
  const QuadResult total = chained.total();
  CHECK(std::abs(total.value - once.value) <= 2 * (total.error_estimate + once.error_estimate) + 1e-14);
}

TEST_CASE("preconditions and budget") {
  CHECK_THROWS_AS(integrate_log(parse("x"), 0.5), PreconditionError);
  QuadTolerance bad;
  bad.abs_tol = -1;
  CHECK_THROWS_AS(integrate_log(parse("x"), 2.0, bad), PreconditionError);

  QuadTolerance tiny;
  tiny.budget = 200;
  try {
    integrate_log(parse("sin(x)"), 1e6, tiny);
    FAIL("expected the budget to run out");
  } catch (const BudgetExhausted& e) {
    CHECK(e.best().evaluations <= 200 + 21);
    CHECK(e.best().error_estimate > 0.0);
  }
  CHECK_THROWS_AS(integrate_log(parse("ln(x - 2)"), 10.0), DomainError);
}
