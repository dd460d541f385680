#include "karamata/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace karamata {
namespace {

// QUADPACK qk21 abscissae and weights.
constexpr double kKronrodNodes[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kKronrodWeights[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208703961100, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kGaussWeights[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
constexpr std::size_t kRuleSize = 21;

struct Segment {
  double a, b;
  double kronrod;
  double error;
};

// Neumaier compensated sum.
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

class LogIntegrator {
 public:
  LogIntegrator(const CompiledExpr& h, const QuadTolerance& tol) : h_(h), tol_(tol) {}

  QuadResult integrate(double u0, double u1) {
    if (u1 <= u0) return {0.0, 0.0, 0};
    const Pass pass = run(evaluate(u0, u1));
    QuadResult out{pass.value, pass.error, evaluations_};
    if (pass.exhausted) throw BudgetExhausted(out);
    return out;
  }

 private:
  struct Pass {
    double value = 0.0;
    double error = 0.0;
    bool exhausted = false;
  };

  double f(double u) {
    ++evaluations_;
    return h_(std::exp(u));
  }

  // qk21 with QUADPACK's scaled error estimate: |K - G| is rescaled by the
  // integrand's variation (resasc) and floored at the rounding level of
  // ∫|f| (resabs).
  Segment evaluate(double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv1[10], fv2[10];
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[10];
    double resabs = std::fabs(kronrod);
    double gauss = 0.0;
    for (int j = 0; j < 5; ++j) {
      const int k = 2 * j + 1;
      const double dx = half * kKronrodNodes[k];
      fv1[k] = f(center - dx);
      fv2[k] = f(center + dx);
      const double sum = fv1[k] + fv2[k];
      gauss += kGaussWeights[j] * sum;
      kronrod += kKronrodWeights[k] * sum;
      resabs += kKronrodWeights[k] * (std::fabs(fv1[k]) + std::fabs(fv2[k]));
    }
    for (int j = 0; j < 5; ++j) {
      const int k = 2 * j;
      const double dx = half * kKronrodNodes[k];
      fv1[k] = f(center - dx);
      fv2[k] = f(center + dx);
      kronrod += kKronrodWeights[k] * (fv1[k] + fv2[k]);
      resabs += kKronrodWeights[k] * (std::fabs(fv1[k]) + std::fabs(fv2[k]));
    }
    const double mean = 0.5 * kronrod;
    double resasc = kKronrodWeights[10] * std::fabs(fc - mean);
    for (int k = 0; k < 10; ++k)
      resasc += kKronrodWeights[k] * (std::fabs(fv1[k] - mean) + std::fabs(fv2[k] - mean));

    const double h = std::fabs(half);
    double err = std::fabs((kronrod - gauss) * half);
    resasc *= h;
    resabs *= h;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, kronrod * half, err};
  }

  // Globally adaptive: always bisect the segment with the largest error
  // estimate until the summed estimate meets the tolerance. Segments at
  // rounding width are retired unsplit.
  Pass run(const Segment& whole) {
    const auto less_urgent = [](const Segment& x, const Segment& y) {
      return x.error < y.error || (x.error == y.error && x.a > y.a);
    };
    std::vector<Segment> heap{whole}, retired;
    double value = whole.kronrod, error = whole.error;
    Pass pass;
    const auto resum = [&] {
      Accumulator v, e;
      for (const auto* list : {&heap, &retired})
        for (const Segment& s : *list) {
          v.add(s.kronrod);
          e.add(s.error);
        }
      value = v.value();
      error = e.value();
    };
    while (!heap.empty()) {
      if (error <= std::max(tol_.abs_tol, tol_.rel_tol * std::fabs(value))) {
        resum();  // the running sums drift; confirm before stopping
        if (error <= std::max(tol_.abs_tol, tol_.rel_tol * std::fabs(value))) break;
      }
      if (evaluations_ + 2 * kRuleSize > tol_.budget) {
        pass.exhausted = true;
        break;
      }
      std::pop_heap(heap.begin(), heap.end(), less_urgent);
      const Segment s = heap.back();
      heap.pop_back();
      const double min_width = 64.0 * std::numeric_limits<double>::epsilon() *
                               std::max(1.0, std::max(std::fabs(s.a), std::fabs(s.b)));
      if (s.b - s.a <= min_width) {
        retired.push_back(s);
        continue;
      }
      const double mid = 0.5 * (s.a + s.b);
      for (const Segment& child : {evaluate(s.a, mid), evaluate(mid, s.b)}) {
        value += child.kronrod;
        error += child.error;
        heap.push_back(child);
        std::push_heap(heap.begin(), heap.end(), less_urgent);
      }
      value -= s.kronrod;
      error -= s.error;
    }
    // final sums in x order, independent of heap layout
    heap.insert(heap.end(), retired.begin(), retired.end());
    std::sort(heap.begin(), heap.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    Accumulator v, e;
    for (const Segment& s : heap) {
      v.add(s.kronrod);
      e.add(s.error);
    }
    pass.value = v.value();
    pass.error = e.value();
    return pass;
  }

  const CompiledExpr& h_;
  const QuadTolerance& tol_;
  std::size_t evaluations_ = 0;
};

}  // namespace

void QuadTolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw PreconditionError("quadrature tolerances must be positive");
  if (budget < 2 * kRuleSize) throw PreconditionError("quadrature budget too small");
}

BudgetExhausted::BudgetExhausted(const QuadResult& best)
    : Error("quadrature budget exhausted after " + std::to_string(best.evaluations) +
            " evaluations (best value " + std::to_string(best.value) + ", error estimate " +
            std::to_string(best.error_estimate) + ")"),
      best_(best) {}

QuadResult integrate_log_range(const Expr& h, double a, double b, const QuadTolerance& tol,
                               const std::string& var) {
  tol.validate();
  if (!(a >= 1.0)) throw PreconditionError("integration requires lower limit >= 1");
  if (!(b >= a)) throw PreconditionError("integration requires upper limit >= lower limit");
  const CompiledExpr compiled(h, {var});
  return LogIntegrator(compiled, tol).integrate(std::log(a), std::log(b));
}

QuadResult integrate_log(const Expr& h, double x, const QuadTolerance& tol,
                         const std::string& var) {
  if (!(x >= 1.0)) throw PreconditionError("integrate_log requires x >= 1");
  return integrate_log_range(h, 1.0, x, tol, var);
}

IntegralCache::IntegralCache(const Expr& integrand, QuadTolerance tol, std::string var)
    : integrand_(integrand), compiled_(integrand, {std::move(var)}), tol_(tol) {
  tol_.validate();
}

QuadResult IntegralCache::extend(double x_next) {
  if (!(x_next >= frontier_))
    throw PreconditionError("extend target " + std::to_string(x_next) +
                            " lies below the cache frontier " + std::to_string(frontier_));
  if (x_next == frontier_) return total();
  const QuadResult segment =
      LogIntegrator(compiled_, tol_).integrate(std::log(frontier_), std::log(x_next));
  accumulated_ += segment.value;
  error_ += segment.error_estimate;
  evaluations_ += segment.evaluations;
  frontier_ = x_next;
  return total();
}

}  // namespace karamata
