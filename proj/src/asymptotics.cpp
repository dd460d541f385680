#include "karamata/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "karamata/operator.hpp"
#include "karamata/parallel.hpp"

namespace karamata {
namespace {

constexpr std::size_t kMinSamples = 8;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// ln-ratios beyond this cannot be exponentiated
constexpr double kMaxLogRatio = 700.0;

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double v : xs) m = std::max(m, std::fabs(v));
  return m;
}

double mean_abs(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double v : xs) s += std::fabs(v);
  return s / static_cast<double>(xs.size());
}

// Polynomial through the last three (s, v) pairs, evaluated at s = 0.
double extrapolate_to_zero(const double s[3], const double v[3]) {
  double p[3] = {v[0], v[1], v[2]};
  for (int level = 1; level < 3; ++level)
    for (int i = 0; i + level < 3; ++i)
      p[i] = (s[i + level] * p[i] - s[i] * p[i + 1]) / (s[i + level] - s[i]);
  return p[0];
}

void validate_lambdas(std::span<const double> lambdas) {
  if (lambdas.empty()) throw PreconditionError("at least one lambda is required");
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l) || l == 1.0)
      throw PreconditionError("lambda must be finite, positive and != 1, got " + num(l));
}

std::vector<Sample> zip(std::span<const double> xs, std::span<const double> values) {
  std::vector<Sample> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = {xs[i], values[i]};
  return out;
}

Expr ln_of(const Expr& a) { return Expr::call(Function::ln, {a}); }

Expr log_rewrite(const Expr& f) {
  switch (f.kind()) {
    case Expr::Kind::binary: {
      const Expr& a = f.children()[0];
      const Expr& b = f.children()[1];
      switch (f.op()) {
        case BinaryOp::mul: return log_rewrite(a) + log_rewrite(b);
        case BinaryOp::div: return log_rewrite(a) - log_rewrite(b);
        case BinaryOp::pow: return b * log_rewrite(a);
        default: return ln_of(f);
      }
    }
    case Expr::Kind::call:
      switch (f.function()) {
        case Function::exp: return f.children()[0];
        case Function::sqrt: return log_rewrite(f.children()[0]) / Expr::constant(2.0);
        case Function::pow: return f.children()[1] * log_rewrite(f.children()[0]);
        default: return ln_of(f);
      }
    default:
      return ln_of(f);
  }
}

}  // namespace

const char* to_string(LimitKind kind) noexcept {
  switch (kind) {
    case LimitKind::converges: return "converges";
    case LimitKind::diverges: return "diverges";
    case LimitKind::oscillates: return "oscillates";
    case LimitKind::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void LimitSettings::validate() const {
  if (!(tol > 0.0)) throw PreconditionError("classification tolerance must be > 0");
  if (!(shrink_factor > 0.0 && shrink_factor <= 1.0))
    throw PreconditionError("shrink factor must lie in (0, 1]");
  if (!(limit_tol > 0.0)) throw PreconditionError("limit tolerance must be > 0");
  if (!(divergence_threshold > 0.0)) throw PreconditionError("divergence threshold must be > 0");
}

bool LimitVerdict::converges_to(double target, double limit_tol) const {
  return kind == LimitKind::converges && std::fabs(limit_estimate() - target) <= limit_tol;
}

std::string LimitVerdict::describe() const {
  switch (kind) {
    case LimitKind::converges:
      if (extrapolated) return "converges to " + num(value) + " (extrapolated " + num(*extrapolated) + ")";
      return "converges to " + num(value);
    case LimitKind::diverges:
      return value > 0 ? "diverges to +inf" : "diverges to -inf";
    case LimitKind::oscillates:
      return "oscillates in [" + num(band_lo) + ", " + num(band_hi) + "] with " +
             std::to_string(sign_changes) + " sign changes";
    case LimitKind::inconclusive:
      break;
  }
  return "inconclusive";
}

LimitVerdict classify_limit(std::span<const Sample> samples, const LimitSettings& settings) {
  settings.validate();
  const std::size_t n = samples.size();
  if (n < kMinSamples)
    throw PreconditionError("limit classification needs at least " + std::to_string(kMinSamples) +
                            " samples, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(samples[i].value) || !std::isfinite(samples[i].x))
      throw PreconditionError("non-finite sample at x = " + num(samples[i].x));
    if (i > 0 && !(samples[i].x > samples[i - 1].x))
      throw PreconditionError("sample abscissae must be strictly increasing");
  }

  const std::size_t m = n / 2;
  const std::size_t nt = n - m;
  std::vector<double> tail(nt), delta(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    tail[j] = samples[m + j].value;
    delta[j] = tail[j] - samples[m + j - 1].value;
  }
  // steps below this count as settled: rounding in log space easily reaches
  // 1e-12 on ratios that are constant in exact arithmetic
  const double noise = 64.0 * kEps * max_abs(tail) + 1e-6 * settings.tol;
  const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(nt);

  LimitVerdict v;
  for (double d : delta) v.tail_residuals.push_back(std::fabs(d));
  std::vector<double> centered(nt);
  int last_sign = 0;
  for (std::size_t j = 0; j < nt; ++j) {
    centered[j] = tail[j] - mean;
    if (std::fabs(centered[j]) <= noise) continue;
    const int s = centered[j] > 0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++v.sign_changes;
    last_sign = s;
  }

  const std::size_t half = nt / 2;
  const std::span<const double> d_first(delta.data(), half);
  const std::span<const double> d_second(delta.data() + half, nt - half);
  const double last_step = std::fabs(delta.back());

  bool growing = tail.front() != 0.0;
  for (std::size_t j = 1; j < nt && growing; ++j)
    growing = (tail[j] > 0) == (tail[0] > 0) && std::fabs(tail[j]) > std::fabs(tail[j - 1]);
  if (growing && last_step > settings.tol) {
    const bool large = std::fabs(tail.back()) >= settings.divergence_threshold;
    const bool steady = mean_abs(d_second) >= settings.shrink_factor * mean_abs(d_first);
    if (large || steady) {
      v.kind = LimitKind::diverges;
      v.value = tail.back() > 0 ? 1.0 : -1.0;
      return v;
    }
  }

  const std::span<const double> c_first(centered.data(), half);
  const std::span<const double> c_second(centered.data() + half, nt - half);
  const double amp_first = max_abs(c_first);
  const double amp_second = max_abs(c_second);
  if (v.sign_changes >= 3 && amp_second >= settings.shrink_factor * amp_first &&
      std::max(amp_first, amp_second) > settings.tol) {
    v.kind = LimitKind::oscillates;
    v.band_lo = *std::min_element(tail.begin(), tail.end());
    v.band_hi = *std::max_element(tail.begin(), tail.end());
    return v;
  }

  const double step_first = max_abs(d_first);
  const double step_second = max_abs(d_second);
  const bool shrinking = step_second <= settings.shrink_factor * step_first || step_second <= noise;
  if (shrinking && last_step <= settings.tol) {
    v.kind = LimitKind::converges;
    v.value = tail.back();
    if (settings.richardson && samples[n - 3].x > 1.0) {
      double s[3], y[3];
      for (int i = 0; i < 3; ++i) {
        s[i] = 1.0 / std::log(samples[n - 3 + i].x);
        y[i] = samples[n - 3 + i].value;
      }
      v.extrapolated = extrapolate_to_zero(s, y);
    }
  }
  return v;
}

Expr log_expression(const Expr& f) { return simplify(log_rewrite(f)); }

LogEvaluator::LogEvaluator(const Expr& f, const std::string& var)
    : direct_(f, {var}), log_form_(log_expression(f), {var}) {}

double LogEvaluator::operator()(double x) const {
  try {
    return log_form_(x);
  } catch (const DomainError&) {
    // some factor is not positive; decide on F itself
  }
  const double value = direct_(x);
  if (!(value > 0.0))
    throw PreconditionError("F must be positive at sampled points, but F(" + num(x) +
                            ") = " + num(value));
  return std::log(value);
}

std::vector<double> default_lambdas() { return {std::numbers::pi, 2.0, 10.0, 0.5}; }

IndexEstimate rv_index(const std::function<double(double)>& log_f, std::span<const double> lambdas,
                       std::span<const double> xs, const IndexSettings& settings) {
  validate_lambdas(lambdas);
  settings.limit.validate();
  if (!(settings.spread_tol > 0.0)) throw PreconditionError("spread tolerance must be > 0");
  if (xs.empty()) throw PreconditionError("index estimation needs sample points");

  IndexEstimate est;
  est.lambdas.assign(lambdas.begin(), lambdas.end());
  est.xs.assign(xs.begin(), xs.end());
  est.table.assign(lambdas.size(), std::vector<double>(xs.size()));
  est.per_lambda.resize(lambdas.size());
  parallel_for(lambdas.size(), settings.workers, [&](std::size_t i) {
    const double l = lambdas[i];
    const double log_l = std::log(l);
    for (std::size_t k = 0; k < xs.size(); ++k)
      est.table[i][k] = (log_f(l * xs[k]) - log_f(xs[k])) / log_l;
    est.per_lambda[i] = classify_limit(zip(xs, est.table[i]), settings.limit);
  });

  double lo = est.table[0].back(), hi = lo, sum = 0.0;
  for (const auto& row : est.table) {
    lo = std::min(lo, row.back());
    hi = std::max(hi, row.back());
    sum += row.back();
  }
  est.rho_hat = sum / static_cast<double>(lambdas.size());
  est.spread = hi - lo;

  bool all_converge = true;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const LimitKind kind = est.per_lambda[i].kind;
    if (kind == LimitKind::oscillates || kind == LimitKind::diverges) {
      est.verdict = VariationKind::no;
      est.reason = std::string("index estimate ") + to_string(kind) + " for lambda = " +
                   num(lambdas[i]);
      return est;
    }
    all_converge = all_converge && kind == LimitKind::converges;
  }
  if (est.spread > settings.spread_tol) {
    est.verdict = VariationKind::no;
    est.reason = "estimates disagree across lambda: spread " + num(est.spread) + " > " +
                 num(settings.spread_tol);
  } else if (all_converge) {
    est.verdict = VariationKind::yes;
    est.reason = "index " + num(est.rho_hat) + " with spread " + num(est.spread);
  } else {
    est.verdict = VariationKind::inconclusive;
    est.reason = "index estimate did not settle within the grid";
  }
  return est;
}

IndexEstimate rv_index(const Expr& f, std::span<const double> lambdas, const GeometricGrid& grid,
                       const IndexSettings& settings, const std::string& var) {
  const std::vector<double> xs = grid.points();
  const LogEvaluator log_f(f, var);
  return rv_index([&log_f](double x) { return log_f(x); }, lambdas, xs, settings);
}

SvReport sv_test(const Expr& f, std::span<const double> lambdas, const GeometricGrid& grid,
                 const IndexSettings& settings, const std::string& var) {
  validate_lambdas(lambdas);
  settings.limit.validate();
  grid.validate();
  const LogEvaluator log_f(f, var);

  SvReport report;
  report.lambdas.assign(lambdas.begin(), lambdas.end());
  std::vector<GeometricGrid> grids{grid};
  if (!grid.integer_mode)
    grids.push_back(GeometricGrid::integers(grid.start, std::max<std::size_t>(grid.count, 64)));

  for (const auto& g : grids) {
    SvPass pass;
    pass.grid = g;
    pass.xs = g.points();
    pass.log_ratio.assign(lambdas.size(), std::vector<double>(pass.xs.size()));
    pass.per_lambda.resize(lambdas.size());
    parallel_for(lambdas.size(), settings.workers, [&](std::size_t i) {
      std::vector<double> ratio(pass.xs.size());
      bool overflow = false;
      for (std::size_t k = 0; k < pass.xs.size(); ++k) {
        const double x = pass.xs[k];
        const double lr = log_f(lambdas[i] * x) - log_f(x);
        pass.log_ratio[i][k] = lr;
        overflow = overflow || lr > kMaxLogRatio;
        ratio[k] = std::exp(std::max(lr, -kMaxLogRatio));
      }
      if (overflow) {
        pass.per_lambda[i].kind = LimitKind::diverges;
        pass.per_lambda[i].value = 1.0;
      } else {
        pass.per_lambda[i] = classify_limit(zip(pass.xs, ratio), settings.limit);
      }
    });
    report.passes.push_back(std::move(pass));
  }

  for (const auto& pass : report.passes) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const LimitKind kind = pass.per_lambda[i].kind;
      if (kind != LimitKind::oscillates && kind != LimitKind::diverges) continue;
      report.verdict = VariationKind::no;
      report.witness_lambda = lambdas[i];
      report.witness_kind = kind;
      report.reason = std::string("F(lambda x)/F(x) ") + to_string(kind) + " for lambda = " +
                      num(lambdas[i]) + (pass.grid.integer_mode ? " on the integer grid" : "");
      return report;
    }
  }

  const SvPass& primary = report.passes.front();
  bool all_converge = true, all_to_one = true;
  double index_sum = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const LimitVerdict& v = primary.per_lambda[i];
    all_converge = all_converge && v.kind == LimitKind::converges;
    all_to_one = all_to_one && v.converges_to(1.0, settings.limit.limit_tol);
    index_sum += primary.log_ratio[i].back() / std::log(lambdas[i]);
  }
  if (all_to_one) {
    report.verdict = VariationKind::yes;
    report.reason = "F(lambda x)/F(x) converges to 1 for every lambda";
  } else if (all_converge) {
    report.verdict = VariationKind::no;
    report.index_hint = index_sum / static_cast<double>(lambdas.size());
    report.reason = "F(lambda x)/F(x) converges away from 1; index about " + num(*report.index_hint);
  } else {
    report.verdict = VariationKind::inconclusive;
    report.reason = "F(lambda x)/F(x) did not settle within the grid";
  }
  return report;
}

ProfileReport exponent_profile(const Expr& f, const GeometricGrid& grid,
                               const LimitSettings& settings, const std::string& var) {
  const LogEvaluator log_f(f, var);
  ProfileReport report;
  report.xs = grid.points();
  report.xi.resize(report.xs.size());
  for (std::size_t k = 0; k < report.xs.size(); ++k)
    report.xi[k] = log_f(report.xs[k]) / std::log(report.xs[k]);
  report.verdict = classify_limit(zip(report.xs, report.xi), settings);
  report.tends_to_zero = report.verdict.converges_to(0.0, settings.limit_tol);
  return report;
}

ClaimedClass ClaimedClass::parse(const std::string& text) {
  if (text == "Z0") return zero();
  if (text == "R0") return slowly_varying();
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  auto number = [&text](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
      throw PreconditionError("malformed class '" + text + "'");
    return v;
  };
  if (parts.size() == 2 && parts[0] == "R") return regularly_varying(number(parts[1]));
  if (parts.size() == 3 && parts[0] == "B") {
    const double lo = number(parts[1]), hi = number(parts[2]);
    if (lo > hi) throw PreconditionError("bounded class needs lo <= hi");
    return bounded(lo, hi);
  }
  throw PreconditionError("unknown class '" + text + "' (expected Z0, R0, R:<alpha>, B:<lo>:<hi>)");
}

std::string ClaimedClass::describe() const {
  switch (kind) {
    case Kind::zero: return "Z0";
    case Kind::slowly_varying: return "R0";
    case Kind::regularly_varying: return "R:" + num(alpha);
    case Kind::bounded: return "B:" + num(lo) + ":" + num(hi);
  }
  return "?";
}

namespace {

// Values of one function on a sorted set of points, looked up exactly.
struct SampledFunction {
  std::vector<double> points;
  std::vector<double> values;

  double at(double x) const {
    auto it = std::lower_bound(points.begin(), points.end(), x);
    if (it == points.end() || *it != x) throw PreconditionError("point was not sampled");
    return values[static_cast<std::size_t>(it - points.begin())];
  }
};

MembershipResult membership(const SampledFunction& fn, const ClaimedClass& claimed,
                            std::span<const double> xs, std::span<const double> lambdas,
                            const IndexSettings& settings) {
  MembershipResult r;
  switch (claimed.kind) {
    case ClaimedClass::Kind::zero: {
      std::vector<Sample> s;
      for (double x : xs) s.push_back({x, fn.at(x)});
      const LimitVerdict v = classify_limit(s, settings.limit);
      r.holds = v.converges_to(0.0, settings.limit.limit_tol);
      r.detail = v.describe();
      return r;
    }
    case ClaimedClass::Kind::slowly_varying:
    case ClaimedClass::Kind::regularly_varying: {
      for (double p : fn.points) {
        if (!(fn.at(p) > 0.0)) {
          r.detail = "not positive at x = " + num(p);
          return r;
        }
      }
      const auto log_f = [&fn](double x) { return std::log(fn.at(x)); };
      const IndexEstimate est = rv_index(log_f, lambdas, xs, settings);
      r.holds = est.verdict == VariationKind::yes &&
                std::fabs(est.rho_hat - claimed.alpha) <= settings.limit.limit_tol;
      r.detail = "index " + num(est.rho_hat) + ", spread " + num(est.spread) + "; " + est.reason;
      return r;
    }
    case ClaimedClass::Kind::bounded: {
      const double slack = 1e-9 * std::max({1.0, std::fabs(claimed.lo), std::fabs(claimed.hi)});
      for (double x : xs) {
        const double v = fn.at(x);
        if (v < claimed.lo - slack || v > claimed.hi + slack) {
          r.detail = "value " + num(v) + " at x = " + num(x) + " leaves [" + num(claimed.lo) +
                     ", " + num(claimed.hi) + "]";
          return r;
        }
      }
      r.holds = true;
      r.detail = "all samples within [" + num(claimed.lo) + ", " + num(claimed.hi) + "]";
      return r;
    }
  }
  return r;
}

}  // namespace

ClassCheckReport class_preservation_check(const Expr& h, const ClaimedClass& claimed,
                                          const GeometricGrid& grid,
                                          std::span<const double> lambdas,
                                          const ClassCheckSettings& settings,
                                          const std::string& var) {
  validate_lambdas(lambdas);
  ClassCheckReport report;
  report.claimed = claimed;
  report.xs = grid.points();

  std::vector<double> points = report.xs;
  const bool needs_lambda = claimed.kind == ClaimedClass::Kind::slowly_varying ||
                            claimed.kind == ClaimedClass::Kind::regularly_varying;
  if (needs_lambda)
    for (double l : lambdas)
      for (double x : report.xs) points.push_back(l * x);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.front() < 1.0)
    throw PreconditionError("lambda * x must stay >= 1 for the operator");

  const CompiledExpr compiled(h, {var});
  SampledFunction h_fn{points, std::vector<double>(points.size())};
  for (std::size_t i = 0; i < points.size(); ++i) h_fn.values[i] = compiled(points[i]);
  SampledFunction l_fn{points, {}};
  for (const Sample& s : apply_L_points(h, points, settings.quad, var)) l_fn.values.push_back(s.value);

  for (double x : report.xs) {
    report.h_values.push_back(h_fn.at(x));
    report.operator_values.push_back(l_fn.at(x));
  }
  ClaimedClass effective = claimed;
  if (claimed.kind == ClaimedClass::Kind::slowly_varying) effective.alpha = 0.0;
  report.hypothesis = membership(h_fn, effective, report.xs, lambdas, settings.index);
  report.conclusion = membership(l_fn, effective, report.xs, lambdas, settings.index);
  report.conclusion_asserted =
      report.hypothesis.holds &&
      !(claimed.kind == ClaimedClass::Kind::regularly_varying && claimed.alpha < 0.0);
  return report;
}

}  // namespace karamata
