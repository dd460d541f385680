#include "karamata/operator.hpp"

#include <cmath>

namespace karamata {

void OperatorRequest::validate() const {
  if (!(x >= 1.0)) throw PreconditionError("the operator requires x >= 1");
  tol.validate();
}

double apply_L(const OperatorRequest& request) {
  request.validate();
  if (request.x - 1.0 <= kNearOneWindow) return eval(request.h, Env{{request.var, 1.0}});
  const QuadResult r = integrate_log(request.h, request.x, request.tol, request.var);
  return r.value / std::log(request.x);
}

double apply_L(const Expr& h, double x, const QuadTolerance& tol, const std::string& var) {
  return apply_L(OperatorRequest{h, x, tol, var});
}

Expr invert_L(const Expr& f, const std::string& var) {
  const Expr x = Expr::variable(var);
  const Expr log_x = Expr::call(Function::ln, {x});
  return simplify(f + (x * differentiate(f, var)) * log_x);
}

std::vector<Sample> apply_L_points(const Expr& h, std::span<const double> xs,
                                   const QuadTolerance& tol, const std::string& var) {
  IntegralCache cache(h, tol, var);
  std::vector<Sample> out;
  out.reserve(xs.size());
  double previous = 1.0;
  for (const double x : xs) {
    if (!(x >= 1.0)) throw PreconditionError("the operator requires x >= 1");
    if (x < previous) throw PreconditionError("operator grid must be ascending");
    previous = x;
    if (x - 1.0 <= kNearOneWindow) {
      out.push_back({x, eval(h, Env{{var, 1.0}})});
      continue;
    }
    const QuadResult total = cache.extend(x);
    out.push_back({x, total.value / std::log(x)});
  }
  return out;
}

std::vector<Sample> apply_L_grid(const Expr& h, const GeometricGrid& grid,
                                 const QuadTolerance& tol, const std::string& var) {
  const std::vector<double> xs = grid.points();
  return apply_L_points(h, xs, tol, var);
}

}  // namespace karamata
