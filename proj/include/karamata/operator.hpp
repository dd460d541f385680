#pragma once

// The Karamata averaging operator
//
//     L(h)(x) = (1 / ln x) ∫_1^x h(t)/t dt,    x > 1,
//
// with L(h)(1) = h(1) by continuity, and its closed-form inverse
//
//     g = f + x f'(x) ln x,   so that L(g) = f.

#include <span>
#include <string>
#include <vector>

#include "karamata/expr.hpp"
#include "karamata/grid.hpp"
#include "karamata/quad.hpp"

namespace karamata {

/// Within this distance of 1 the operator returns h(1) instead of the
/// 0/0 quotient.
inline constexpr double kNearOneWindow = 1e-8;

struct OperatorRequest {
  Expr h;
  double x = 1.0;
  QuadTolerance tol{};
  std::string var = "x";

  void validate() const;
};

double apply_L(const OperatorRequest& request);
double apply_L(const Expr& h, double x, const QuadTolerance& tol = {},
               const std::string& var = "x");

/// Symbolic inverse: returns simplify(f + var * f' * ln(var)).
Expr invert_L(const Expr& f, const std::string& var = "x");

/// L(h) at each of an ascending list of points >= 1, sharing one
/// IntegralCache so the total cost is one pass over [1, max x].
std::vector<Sample> apply_L_points(const Expr& h, std::span<const double> xs,
                                   const QuadTolerance& tol = {}, const std::string& var = "x");
std::vector<Sample> apply_L_grid(const Expr& h, const GeometricGrid& grid,
                                 const QuadTolerance& tol = {}, const std::string& var = "x");

}  // namespace karamata
