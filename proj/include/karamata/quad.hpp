#pragma once

// Adaptive quadrature of the log-measure integral  ∫_1^x h(t)/t dt.
//
// The integral is taken after the substitution t = e^u, i.e. as
// ∫_0^{ln x} h(e^u) du, with adaptive bisection driven by a 10/21-point
// Gauss-Kronrod pair. The subinterval with the largest error estimate is
// split until the summed estimate is within max(abs_tol, rel_tol |value|).

#include <cstddef>
#include <string>

#include "karamata/errors.hpp"
#include "karamata/expr.hpp"

namespace karamata {

struct QuadTolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t budget = 20'000'000;  // integrand evaluations per call

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute, >= 0
  std::size_t evaluations = 0;
};

/// The evaluation budget ran out before the tolerance was met. Carries the
/// best value found and its error estimate.
class BudgetExhausted : public Error {
 public:
  explicit BudgetExhausted(const QuadResult& best);
  const QuadResult& best() const noexcept { return best_; }

 private:
  QuadResult best_;
};

/// ∫_1^x h(t)/t dt with h a function of `var`. Requires x >= 1.
QuadResult integrate_log(const Expr& h, double x, const QuadTolerance& tol = {},
                         const std::string& var = "x");

/// ∫_a^b h(t)/t dt for 1 <= a <= b.
QuadResult integrate_log_range(const Expr& h, double a, double b, const QuadTolerance& tol = {},
                               const std::string& var = "x");

/// Running value of ∫_1^frontier h(t)/t dt, extended segment by segment
/// along an increasing sequence of upper limits. Single owner; give each
/// worker its own cache.
class IntegralCache {
 public:
  explicit IntegralCache(const Expr& integrand, QuadTolerance tol = {}, std::string var = "x");

  /// Integrates [frontier, x_next] and returns the running total.
  QuadResult extend(double x_next);

  double frontier() const noexcept { return frontier_; }
  double accumulated() const noexcept { return accumulated_; }
  QuadResult total() const noexcept { return {accumulated_, error_, evaluations_}; }
  const Expr& integrand() const noexcept { return integrand_; }
  const QuadTolerance& tolerance() const noexcept { return tol_; }

 private:
  Expr integrand_;
  CompiledExpr compiled_;
  QuadTolerance tol_;
  double frontier_ = 1.0;
  double accumulated_ = 0.0;
  double error_ = 0.0;
  std::size_t evaluations_ = 0;
};

}  // namespace karamata
