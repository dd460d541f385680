#include "karamata/uniformity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "karamata/operator.hpp"
#include "karamata/parallel.hpp"

namespace karamata {
namespace {

constexpr std::size_t kMinClassified = 8;
constexpr std::size_t kMinIntervalPoints = 9;

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

[[noreturn]] void rethrow_located(const DomainError& e, const std::string& where) {
  std::string what = e.what();
  const std::string suffix = " in `" + e.subexpression() + "`";
  if (what.size() >= suffix.size() && what.compare(what.size() - suffix.size(), suffix.size(), suffix) == 0)
    what.erase(what.size() - suffix.size());
  throw DomainError(what + " at " + where, e.subexpression());
}

// Maximizes fn on [lo, hi]; on ties the left half is kept.
std::pair<double, double> golden_max(const std::function<double(double)>& fn, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max({1.0, std::fabs(lo), std::fabs(hi)}); ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = fn(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = fn(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

double radical_inverse(std::size_t index, std::size_t base) {
  double result = 0.0, scale = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= static_cast<double>(base);
  }
  return result;
}

void check_interval(double a, double b, std::size_t count) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw PreconditionError("parameter interval needs finite a < b");
  if (count < kMinIntervalPoints)
    throw PreconditionError("parameter grid needs at least " + std::to_string(kMinIntervalPoints) +
                            " points");
}

std::optional<LimitVerdict> classify_if_possible(std::span<const double> xs,
                                                 std::span<const double> values,
                                                 const LimitSettings& settings) {
  if (xs.size() < kMinClassified) return std::nullopt;
  std::vector<Sample> s(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) s[i] = {xs[i], values[i]};
  return classify_limit(s, settings);
}

}  // namespace

const char* to_string(UniformityKind kind) noexcept {
  switch (kind) {
    case UniformityKind::uniform: return "uniform";
    case UniformityKind::not_uniform: return "not_uniform";
    case UniformityKind::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> linspace(double a, double b, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {a};
  std::vector<double> out(count);
  const double step = (b - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = a + step * static_cast<double>(i);
  out.back() = b;
  return out;
}

ScanReport scan_residuals(const ResidualFn& residual, std::span<const double> xs,
                          std::span<const double> params,
                          std::optional<std::pair<double, double>> interval,
                          const ScanSettings& settings) {
  settings.limit.validate();
  if (xs.empty() || params.empty()) throw PreconditionError("scan needs x and parameter samples");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw PreconditionError("scan x grid must be strictly increasing");

  ScanReport r;
  r.xs.assign(xs.begin(), xs.end());
  r.params.assign(params.begin(), params.end());
  r.residuals.assign(xs.size(), std::vector<double>(params.size()));
  r.suprema.resize(xs.size());
  r.argmax.resize(xs.size());
  r.refined = settings.refine && interval.has_value() && params.size() >= 2;

  auto eval_at = [&residual](double x, double p) {
    double value = 0.0;
    try {
      value = residual(x, p);
    } catch (const DomainError& e) {
      rethrow_located(e, "(x, p) = (" + num(x) + ", " + num(p) + ")");
    }
    if (!std::isfinite(value))
      throw DomainError("non-finite residual at (x, p) = (" + num(x) + ", " + num(p) + ")",
                        "residual");
    return value;
  };

  parallel_for(xs.size(), settings.workers, [&](std::size_t i) {
    const double x = xs[i];
    std::size_t best = 0;
    for (std::size_t j = 0; j < params.size(); ++j) {
      r.residuals[i][j] = eval_at(x, params[j]);
      if (std::fabs(r.residuals[i][j]) > std::fabs(r.residuals[i][best])) best = j;
    }
    r.suprema[i] = std::fabs(r.residuals[i][best]);
    r.argmax[i] = params[best];
    if (r.refined) {
      const double lo = params[best == 0 ? 0 : best - 1];
      const double hi = params[std::min(best + 1, params.size() - 1)];
      const auto [arg, value] =
          golden_max([&](double p) { return std::fabs(eval_at(x, p)); }, lo, hi);
      if (value > r.suprema[i]) {
        r.suprema[i] = value;
        r.argmax[i] = arg;
      }
    }
  });

  if (xs.size() < kMinClassified) {
    r.reason = "at least " + std::to_string(kMinClassified) + " x samples are needed to classify";
    return r;
  }
  for (std::size_t j = 0; j < params.size(); ++j) {
    std::vector<double> column(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) column[i] = r.residuals[i][j];
    r.column_verdicts.push_back(*classify_if_possible(xs, column, settings.limit));
  }
  r.suprema_verdict = *classify_if_possible(xs, r.suprema, settings.limit);

  const LimitVerdict& sv = r.suprema_verdict;
  const std::size_t n = xs.size(), m = n / 2, half = m + (n - m) / 2;
  const double first = *std::max_element(r.suprema.begin() + m, r.suprema.begin() + half);
  const double second = *std::max_element(r.suprema.begin() + half, r.suprema.end());
  const double floor = std::min(first, second);
  const bool not_shrinking = r.suprema.back() >= r.suprema[m] - settings.limit.tol;

  if (sv.kind == LimitKind::converges && sv.value <= settings.limit.limit_tol) {
    r.verdict = UniformityKind::uniform;
    r.certified_interval = interval;
    r.reason = "suprema " + sv.describe() + " on the scanned grid";
  } else if (floor > settings.limit.limit_tol &&
             (sv.kind == LimitKind::oscillates || sv.kind == LimitKind::diverges ||
              sv.kind == LimitKind::converges || not_shrinking)) {
    r.verdict = UniformityKind::not_uniform;
    r.witness = r.argmax.back();
    r.floor = floor;
    r.reason = "suprema stay above " + num(floor) + " (" + sv.describe() + ")";
  } else {
    r.reason = "suprema " + sv.describe();
  }
  return r;
}

ScanReport uct_scan(const Expr& g, double a, double b, const GeometricGrid& grid,
                    std::size_t u_count, const ScanSettings& settings, const std::string& xvar,
                    const std::string& uvar) {
  check_interval(a, b, u_count);
  const CompiledExpr compiled(g, {xvar, uvar});
  const auto xs = grid.points();
  const auto us = linspace(a, b, u_count);
  return scan_residuals([&compiled](double x, double u) { return compiled(x, u); }, xs, us,
                        std::pair{a, b}, settings);
}

ScanReport karamata_uct_check(const Expr& f, double a, double b, const GeometricGrid& grid,
                              std::size_t lambda_count, const ScanSettings& settings,
                              const std::string& var) {
  check_interval(a, b, lambda_count);
  if (!(a > 0.0)) throw PreconditionError("lambda interval must lie in (0, inf)");
  const LogEvaluator log_f(f, var);
  const auto xs = grid.points();
  const auto lambdas = linspace(a, b, lambda_count);
  return scan_residuals(
      [&log_f](double x, double l) { return std::expm1(log_f(l * x) - log_f(x)); }, xs, lambdas,
      std::pair{a, b}, settings);
}

ScanReport condition_scan_310(const Expr& xi, double a, double b, const GeometricGrid& grid,
                              std::size_t lambda_count, const ScanSettings& settings,
                              const std::string& var) {
  check_interval(a, b, lambda_count);
  if (!(a > 0.0)) throw PreconditionError("lambda interval must lie in (0, inf)");
  const CompiledExpr compiled(xi, {var});
  const auto xs = grid.points();
  const auto lambdas = linspace(a, b, lambda_count);
  return scan_residuals(
      [&compiled](double x, double l) { return (compiled(l * x) - compiled(x)) * std::log(x); },
      xs, lambdas, std::pair{a, b}, settings);
}

ScanReport condition_scan_310(const Expr& xi, std::span<const double> lambdas,
                              const GeometricGrid& grid, const ScanSettings& settings,
                              const std::string& var) {
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l)) throw PreconditionError("lambda must be positive");
  const CompiledExpr compiled(xi, {var});
  const auto xs = grid.points();
  return scan_residuals(
      [&compiled](double x, double l) { return (compiled(l * x) - compiled(x)) * std::log(x); },
      xs, lambdas, std::nullopt, settings);
}

void HiRegion::validate() const {
  const double all[] = {x_lo, x_hi, u_lo, u_hi, v_lo, v_hi};
  for (double v : all)
    if (!std::isfinite(v)) throw PreconditionError("region bounds must be finite");
  if (!(x_lo <= x_hi) || !(u_lo <= u_hi) || !(v_lo <= v_hi))
    throw PreconditionError("region bounds must satisfy lo <= hi");
}

HypothesisReport hi_check(const Expr& h, std::size_t sample_count, const HiRegion& region) {
  region.validate();
  if (sample_count == 0) throw PreconditionError("sample count must be positive");
  const CompiledExpr compiled(h, {"x", "u"});
  const bool log_x = region.x_lo > 0.0;
  HypothesisReport report;
  report.samples = sample_count;
  for (std::size_t i = 1; i <= sample_count; ++i) {
    const double qx = radical_inverse(i, 2), qu = radical_inverse(i, 3), qv = radical_inverse(i, 5);
    const double x = log_x ? region.x_lo * std::pow(region.x_hi / region.x_lo, qx)
                           : region.x_lo + qx * (region.x_hi - region.x_lo);
    const double u = region.u_lo + qu * (region.u_hi - region.u_lo);
    const double v = region.v_lo + qv * (region.v_hi - region.v_lo);
    double lhs = 0.0, rhs = 0.0;
    try {
      lhs = compiled(x, u);
      rhs = compiled(x + u, v) + compiled(x, u + v);
    } catch (const DomainError& e) {
      rethrow_located(e, "(x, u, v) = (" + num(x) + ", " + num(u) + ", " + num(v) + ")");
    }
    const double slack = 1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    if (lhs > rhs + slack) report.violations.push_back({x, u, v, lhs, rhs});
  }
  return report;
}

GuctReport guct_diagnose(const Expr& h, const Expr& m, double a, double b,
                         const GeometricGrid& grid, std::size_t u_count,
                         const GuctSettings& settings) {
  check_interval(a, b, u_count);
  if (settings.m_density == 0) throw PreconditionError("m sampling density must be positive");
  const auto xs = grid.points();
  GuctReport report;
  report.hi = hi_check(h, settings.hi_samples, {xs.front(), xs.back(), a, b, a, b});

  const CompiledExpr m_compiled(m, {"x"});
  auto& mc = report.m_check;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k)
    for (std::size_t j = 0; j < settings.m_density; ++j)
      mc.xs.push_back(xs[k] * std::pow(xs[k + 1] / xs[k], static_cast<double>(j) /
                                                              static_cast<double>(settings.m_density)));
  mc.xs.push_back(xs.back());
  for (double x : mc.xs) mc.values.push_back(m_compiled(x));
  for (std::size_t i = 0; i < mc.xs.size(); ++i) {
    if (mc.positive && !(mc.values[i] > 0.0)) {
      mc.positive = false;
      if (mc.detail.empty()) mc.detail = "m(" + num(mc.xs[i]) + ") = " + num(mc.values[i]) + " is not positive";
    }
    if (i > 0 && mc.nondecreasing &&
        mc.values[i] < mc.values[i - 1] - 1e-12 * std::max(1.0, std::fabs(mc.values[i - 1]))) {
      mc.nondecreasing = false;
      if (mc.detail.empty())
        mc.detail = "m decreases between x = " + num(mc.xs[i - 1]) + " and x = " + num(mc.xs[i]);
    }
  }
  if (mc.holds()) mc.detail = "m positive and nondecreasing on " + std::to_string(mc.xs.size()) + " samples";

  report.scan = uct_scan(h * m, a, b, grid, u_count, settings.scan);

  auto& pw = report.pointwise;
  if (report.scan.column_verdicts.empty()) {
    pw.detail = "too few x samples for a pointwise limit";
  } else {
    pw.holds = true;
    for (std::size_t j = 0; j < report.scan.params.size(); ++j) {
      const LimitVerdict& v = report.scan.column_verdicts[j];
      if (!v.converges_to(0.0, settings.scan.limit.limit_tol)) {
        pw.holds = false;
        pw.failing_param = report.scan.params[j];
        pw.detail = "G(x, " + num(report.scan.params[j]) + ") " + v.describe();
        break;
      }
    }
    if (pw.holds) pw.detail = "G(x, u) tends to 0 for every sampled u";
  }
  report.hypotheses_hold = report.hi.passed() && mc.holds() && pw.holds;
  report.conclusion_asserted = report.hypotheses_hold;
  return report;
}

ClosureReport mult_closure_residual(const Expr& f, double lambda, double mu,
                                    const GeometricGrid& grid, const LimitSettings& settings,
                                    const std::string& var) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu))
    throw PreconditionError("lambda and mu must be positive");
  const CompiledExpr compiled(f, {var});
  ClosureReport r;
  r.lambda = lambda;
  r.mu = mu;
  r.xs = grid.points();
  r.identity_holds = true;
  for (double x : r.xs) {
    const double log_x = std::log(x);
    // f(λμx) is taken at μ(λx), the same point as the second column
    const double lx = lambda * x, lmx = mu * lx;
    const double f0 = compiled(x), f1 = compiled(lx), f2 = compiled(lmx);
    const double c1 = (f1 - f0) * log_x, c2 = (f2 - f1) * log_x, c3 = (f2 - f0) * log_x;
    r.first.push_back(c1);
    r.second.push_back(c2);
    r.third.push_back(c3);
    const double scale = c3 != 0.0 ? std::fabs(c3) : std::max(std::fabs(c1), std::fabs(c2));
    const double gap = std::fabs(c3 - (c1 + c2));
    double ulps = 0.0;
    if (gap > 0.0) {
      const double ulp = scale > 0.0 ? std::nextafter(scale, INFINITY) - scale : 0.0;
      ulps = ulp > 0.0 ? gap / ulp : INFINITY;
    }
    r.max_identity_ulps = std::max(r.max_identity_ulps, ulps);
  }
  r.identity_holds = r.max_identity_ulps <= 4.0;
  r.first_verdict = classify_if_possible(r.xs, r.first, settings);
  r.second_verdict = classify_if_possible(r.xs, r.second, settings);
  r.third_verdict = classify_if_possible(r.xs, r.third, settings);
  return r;
}

std::pair<double, double> interval_expand(double a, double b, int n) {
  if (!(a > 0.0) || !(a < b) || !std::isfinite(b))
    throw PreconditionError("interval expansion needs 0 < a < b");
  if (n < 0) throw PreconditionError("iteration count must be >= 0");
  if (n == 0) return {a, b};
  return {std::pow(a / b, n), std::pow(b / a, n)};
}

AsymReport integral_asym_residual(const Expr& h, double lambda, const GeometricGrid& grid,
                                  double bound, const QuadTolerance& tol,
                                  const LimitSettings& settings, const std::string& var) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw PreconditionError("lambda must be > 1");
  if (!(bound > 0.0)) throw PreconditionError("the bound M must be > 0");
  AsymReport r;
  r.lambda = lambda;
  r.bound = bound;
  r.xs = grid.points();

  const CompiledExpr compiled(h, {var});
  std::vector<double> probes = r.xs;
  for (double x : r.xs) probes.push_back(lambda * x);
  const double top = lambda * r.xs.back();
  constexpr int kProbes = 256;
  for (int i = 0; i <= kProbes; ++i) probes.push_back(std::pow(top, static_cast<double>(i) / kProbes));
  std::sort(probes.begin(), probes.end());
  r.hypothesis.holds = true;
  for (double t : probes) {
    const double v = compiled(t);
    if (!(v > 0.0) || v > bound * (1.0 + 1e-12)) {
      r.hypothesis.holds = false;
      r.hypothesis.detail = "h(" + num(t) + ") = " + num(v) + " is outside (0, " + num(bound) + "]";
      break;
    }
  }
  if (r.hypothesis.holds)
    r.hypothesis.detail = "0 < h <= " + num(bound) + " on " + std::to_string(probes.size()) + " samples";

  std::vector<double> upper = r.xs;
  for (double x : r.xs) upper.push_back(lambda * x);
  std::sort(upper.begin(), upper.end());
  upper.erase(std::unique(upper.begin(), upper.end()), upper.end());
  IntegralCache cache(h, tol, var);
  std::vector<double> totals;
  for (double p : upper) totals.push_back(cache.extend(p).value);
  auto integral_to = [&](double p) {
    return totals[static_cast<std::size_t>(std::lower_bound(upper.begin(), upper.end(), p) - upper.begin())];
  };

  const double log_l = std::log(lambda);
  for (double x : r.xs) {
    const double log_x = std::log(x);
    const double weight = log_l / (log_l + log_x);
    const double to_x = integral_to(x), to_lx = integral_to(lambda * x);
    const double segment = integrate_log_range(h, x, lambda * x, tol, var).value;
    r.lhs.push_back(segment);
    r.rhs.push_back(weight * to_x);
    r.residual.push_back(segment - weight * to_x);
    r.i_form.push_back(segment - weight * to_lx);
    const double l_x = log_x > 0.0 ? to_x / log_x : compiled(1.0);
    r.lcond.push_back((to_lx / (log_l + log_x) - l_x) * log_x);
  }
  r.residual_verdict = classify_if_possible(r.xs, r.residual, settings);
  r.lcond_verdict = classify_if_possible(r.xs, r.lcond, settings);
  return r;
}

}  // namespace karamata
