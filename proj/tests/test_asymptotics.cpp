#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "karamata/asymptotics.hpp"

using namespace karamata;

namespace {

std::vector<Sample> tabulate(double (*f)(double), const GeometricGrid& grid) {
  std::vector<Sample> out;
  for (double x : grid.points()) out.push_back({x, f(x)});
  return out;
}

const std::vector<double> kTwoTen = {2.0, 10.0};

}  // namespace

TEST_CASE("limit classification") {
  const auto grid = GeometricGrid::geometric(10.0, 2.0, 12);
  auto v = classify_limit(tabulate([](double x) { return 1.0 / x; }, grid));
  CHECK(v.kind == LimitKind::converges);
  CHECK(std::abs(v.value) < 1e-3);
  CHECK(v.converges_to(0.0, 0.05));

  v = classify_limit(tabulate([](double) { return 4.0; }, grid));
  CHECK(v.kind == LimitKind::converges);
  CHECK(v.value == 4.0);

  v = classify_limit(tabulate([](double x) { return std::log(x); }, grid));
  CHECK(v.kind == LimitKind::diverges);
  CHECK(v.value == 1.0);

  v = classify_limit(tabulate([](double x) { return -x; }, grid));
  CHECK(v.kind == LimitKind::diverges);
  CHECK(v.value == -1.0);

  const auto ints = GeometricGrid::integers(2.0, 64);
  v = classify_limit(tabulate([](double x) { return std::sin(x); }, ints));
  CHECK(v.kind == LimitKind::oscillates);
  CHECK(v.band_lo >= -1.0 - 1e-3);
  CHECK(v.band_hi <= 1.0 + 1e-3);
  CHECK(v.band_hi - v.band_lo > 1.5);
  CHECK(v.sign_changes >= 3);
}

TEST_CASE("limit classification preconditions") {
  std::vector<Sample> few = {{1, 1}, {2, 1}, {3, 1}};
  CHECK_THROWS_AS(classify_limit(few), PreconditionError);
  std::vector<Sample> unordered;
  for (int k = 0; k < 10; ++k) unordered.push_back({10.0 - k, 1.0});
  CHECK_THROWS_AS(classify_limit(unordered), PreconditionError);
  LimitSettings bad;
  bad.shrink_factor = 1.5;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("extrapolation in 1/ln x sharpens a slow limit") {
  // 2 + 1/ln x: the raw tail sits well away from 2, the extrapolated value does not
  const auto grid = GeometricGrid::geometric(10.0, 10.0, 12);
  LimitSettings s;
  s.tol = 0.1;
  s.richardson = true;
  const auto v = classify_limit(tabulate([](double x) { return 2.0 + 1.0 / std::log(x); }, grid), s);
  REQUIRE(v.extrapolated.has_value());
  CHECK(std::abs(*v.extrapolated - 2.0) < 1e-9);
  CHECK(std::abs(v.value - 2.0) > 0.01);
}

TEST_CASE("log evaluation survives overflow") {
  const LogEvaluator big(parse("x^400"));
  CHECK(std::abs(big(1e300) - 400 * std::log(1e300)) < 1e-9 * 400 * std::log(1e300));
  const LogEvaluator prod(parse("sqrt(x)*exp(x)"));
  CHECK(std::abs(prod(1e4) - (0.5 * std::log(1e4) + 1e4)) < 1e-9);
  const LogEvaluator neg(parse("-x"));
  CHECK_THROWS_AS(neg(2.0), PreconditionError);
  const LogEvaluator sign_change(parse("sin(x)"));
  CHECK_THROWS_AS(sign_change(4.0), PreconditionError);
}

TEST_CASE("index of pure powers is exact") {
  const auto grid = GeometricGrid::geometric(10.0, 10.0, 8);
  for (double rho : {0.5, 2.0, -1.0}) {
    const auto est = rv_index(parse("x^" + std::to_string(rho)), kTwoTen, grid);
    CAPTURE(rho);
    CHECK(std::abs(est.rho_hat - rho) < 1e-9);
    CHECK(est.verdict == VariationKind::yes);
  }
}

TEST_CASE("index with a log factor follows the analytic finite-x curve") {
  // For sqrt(x) ln x the estimator equals 0.5 + ln(1 + ln λ / ln x) / ln λ.
  const auto grid = GeometricGrid::geometric(10.0, 10.0, 8);
  const auto est = rv_index(parse("sqrt(x)*ln(x)"), kTwoTen, grid);
  for (std::size_t l = 0; l < est.lambdas.size(); ++l) {
    const double lam = est.lambdas[l];
    for (std::size_t k = 0; k < est.xs.size(); ++k) {
      const double want = 0.5 + std::log1p(std::log(lam) / std::log(est.xs[k])) / std::log(lam);
      CHECK(std::abs(est.table[l][k] - want) < 1e-9);
    }
    for (std::size_t k = 1; k < est.xs.size(); ++k) CHECK(est.table[l][k] < est.table[l][k - 1]);
  }
  // far out the estimate settles onto 0.5
  const auto far = rv_index(parse("sqrt(x)*ln(x)"), kTwoTen, GeometricGrid::geometric(10.0, 1e10, 30));
  CHECK(std::abs(far.rho_hat - 0.5) < 0.05);
}

TEST_CASE("index invariants") {
  const auto grid = GeometricGrid::geometric(10.0, 10.0, 8);
  const auto base = rv_index(parse("x^2"), kTwoTen, grid);
  const auto scaled = rv_index(parse("5*x^2"), kTwoTen, grid);
  CHECK(std::abs(base.rho_hat - scaled.rho_hat) < 1e-12);
  const auto half = rv_index(parse("x^0.5"), kTwoTen, grid);
  const auto product = rv_index(parse("x^0.5*x^2"), kTwoTen, grid);
  CHECK(std::abs(product.rho_hat - (half.rho_hat + base.rho_hat)) < 0.1);
  CHECK_THROWS_AS(rv_index(parse("x - 100"), kTwoTen, grid), PreconditionError);
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(rv_index(parse("x"), one, grid), PreconditionError);
}

TEST_CASE("index evaluation is the same with several workers") {
  const auto grid = GeometricGrid::geometric(10.0, 10.0, 10);
  IndexSettings serial, threaded;
  threaded.workers = 6;
  const auto a = rv_index(parse("x^0.3*ln(x)^2"), default_lambdas(), grid, serial);
  const auto b = rv_index(parse("x^0.3*ln(x)^2"), default_lambdas(), grid, threaded);
  CHECK(a.table == b.table);
  CHECK(a.rho_hat == b.rho_hat);
}

TEST_CASE("slow variation") {
  const auto grid = GeometricGrid::geometric(10.0, 10.0, 60);
  const auto lnx = sv_test(parse("ln(x)"), default_lambdas(), grid);
  CHECK(lnx.verdict == VariationKind::yes);
  REQUIRE(lnx.passes.size() == 2);
  CHECK(lnx.passes[1].grid.integer_mode);

  const auto power = sv_test(parse("x^0.1"), default_lambdas(), grid);
  CHECK(power.verdict == VariationKind::no);
  REQUIRE(power.index_hint.has_value());
  CHECK(std::abs(*power.index_hint - 0.1) < 1e-6);

  const double pi_only[] = {std::numbers::pi};
  const auto osc = sv_test(parse("x^(sin(x)/ln(x))"), pi_only, GeometricGrid::integers(1000, 33));
  CHECK(osc.verdict == VariationKind::no);
  REQUIRE(osc.witness_lambda.has_value());
  CHECK(*osc.witness_lambda == std::numbers::pi);
  CHECK(osc.witness_kind == LimitKind::oscillates);
  REQUIRE(osc.passes.size() == 1);

  CHECK(default_lambdas().front() == std::numbers::pi);
}

TEST_CASE("exponent profile") {
  const auto grid = GeometricGrid::geometric(10.0, 10.0, 12);
  const auto cube = exponent_profile(parse("x^3"), grid);
  for (double v : cube.xi) CHECK(std::abs(v - 3.0) < 1e-12);
  CHECK_FALSE(cube.tends_to_zero);

  const auto seven = exponent_profile(parse("7"), grid);
  for (std::size_t k = 0; k < seven.xs.size(); ++k)
    CHECK(std::abs(seven.xi[k] - std::log(7.0) / std::log(seven.xs[k])) < 1e-14);

  const auto lnx = exponent_profile(parse("ln(x)"), GeometricGrid::geometric(10.0, 10.0, 60));
  for (std::size_t k = 0; k < lnx.xs.size(); ++k) {
    const double l = std::log(lnx.xs[k]);
    CHECK(std::abs(lnx.xi[k] - std::log(l) / l) < 1e-14);
  }
  CHECK(lnx.verdict.kind == LimitKind::converges);
  CHECK(lnx.tends_to_zero);
}

TEST_CASE("claimed classes parse") {
  CHECK(ClaimedClass::parse("Z0").kind == ClaimedClass::Kind::zero);
  CHECK(ClaimedClass::parse("R0").kind == ClaimedClass::Kind::slowly_varying);
  const auto r = ClaimedClass::parse("R:1.5");
  CHECK(r.kind == ClaimedClass::Kind::regularly_varying);
  CHECK(r.alpha == 1.5);
  const auto b = ClaimedClass::parse("B:-1:2");
  CHECK(b.lo == -1.0);
  CHECK(b.hi == 2.0);
  CHECK_THROWS_AS(ClaimedClass::parse("Q"), PreconditionError);
  CHECK_THROWS_AS(ClaimedClass::parse("B:3:1"), PreconditionError);
}

TEST_CASE("class preservation") {
  const auto grid = GeometricGrid::geometric(10.0, 10.0, 60);
  const auto z = class_preservation_check(parse("1/x"), ClaimedClass::zero(), grid, default_lambdas());
  CHECK(z.hypothesis.holds);
  CHECK(z.conclusion_asserted);
  CHECK(z.conclusion.holds);

  const auto b = class_preservation_check(parse("2 + sin(x)"), ClaimedClass::bounded(1, 3),
                                          GeometricGrid::geometric(2.0, 2.0, 20), default_lambdas());
  CHECK(b.hypothesis.holds);
  CHECK(b.conclusion.holds);

  const auto lin = class_preservation_check(parse("x"), ClaimedClass::regularly_varying(1.0), grid,
                                            default_lambdas());
  CHECK(lin.hypothesis.holds);
  CHECK(lin.conclusion.holds);

  const auto bad = class_preservation_check(parse("x"), ClaimedClass::zero(), grid, default_lambdas());
  CHECK_FALSE(bad.hypothesis.holds);
  CHECK_FALSE(bad.conclusion_asserted);

  const auto negative = class_preservation_check(parse("x^(-0.5)"), ClaimedClass::regularly_varying(-0.5),
                                                 grid, default_lambdas());
  CHECK(negative.hypothesis.holds);
  CHECK_FALSE(negative.conclusion_asserted);
  CHECK(negative.operator_values.size() == negative.xs.size());
}
