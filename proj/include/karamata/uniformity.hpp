#pragma once

// Uniform-convergence scanners and residual diagnostics.
//
// A scan tabulates a residual R(x, p) over an x grid and a parameter grid,
// takes per-x suprema of |R| (with one local refinement around the grid
// argmax for interval scans) and classifies the suprema as x grows.
// NotUniform comes with a concrete witness; Uniform is evidence at the
// stated grid resolution only.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "karamata/asymptotics.hpp"
#include "karamata/expr.hpp"
#include "karamata/grid.hpp"
#include "karamata/quad.hpp"

namespace karamata {

enum class UniformityKind { uniform, not_uniform, inconclusive };

const char* to_string(UniformityKind kind) noexcept;

struct ScanSettings {
  LimitSettings limit{};
  std::size_t workers = 1;
  bool refine = true;  // golden-section pass around the per-x argmax
};

struct ScanReport {
  std::vector<double> xs;
  std::vector<double> params;
  std::vector<std::vector<double>> residuals;  // [x][param], signed
  std::vector<double> suprema;                 // per x, of |R|
  std::vector<double> argmax;                  // parameter attaining each supremum
  bool refined = false;
  LimitVerdict suprema_verdict;
  std::vector<LimitVerdict> column_verdicts;   // per parameter, of the signed column

  UniformityKind verdict = UniformityKind::inconclusive;
  std::optional<double> witness;  // NotUniform: parameter at the last x
  double floor = 0.0;             // NotUniform: level the suprema stay above
  /// Uniform over an interval scan: the scanned interval, and nothing wider.
  std::optional<std::pair<double, double>> certified_interval;
  std::string reason;
};

/// The residual R(x, p) behind a scan.
using ResidualFn = std::function<double(double x, double p)>;

/// Parameters spread evenly over [a, b], endpoints included.
std::vector<double> linspace(double a, double b, std::size_t count);

/// Generic scan. `interval` enables refinement within it; explicit
/// parameter lists are scanned as given.
ScanReport scan_residuals(const ResidualFn& residual, std::span<const double> xs,
                          std::span<const double> params,
                          std::optional<std::pair<double, double>> interval,
                          const ScanSettings& settings = {});

/// R(x, u) = G(x, u) for u in [a, b]; needs u_count >= 9.
ScanReport uct_scan(const Expr& g, double a, double b, const GeometricGrid& grid,
                    std::size_t u_count, const ScanSettings& settings = {},
                    const std::string& xvar = "x", const std::string& uvar = "u");

/// R(x, λ) = F(λx)/F(x) - 1 for λ in [a, b], 0 < a < b.
ScanReport karamata_uct_check(const Expr& f, double a, double b, const GeometricGrid& grid,
                              std::size_t lambda_count, const ScanSettings& settings = {},
                              const std::string& var = "x");

/// R(x, λ) = (ξ(λx) - ξ(x)) ln x for λ in [a, b].
ScanReport condition_scan_310(const Expr& xi, double a, double b, const GeometricGrid& grid,
                              std::size_t lambda_count, const ScanSettings& settings = {},
                              const std::string& var = "x");
/// Same residual at an explicit list of λ (no refinement).
ScanReport condition_scan_310(const Expr& xi, std::span<const double> lambdas,
                              const GeometricGrid& grid, const ScanSettings& settings = {},
                              const std::string& var = "x");

struct HiRegion {
  double x_lo = 1.0, x_hi = 1e6;
  double u_lo = 0.0, u_hi = 1.0;
  double v_lo = 0.0, v_hi = 1.0;

  void validate() const;
};

struct Violation {
  double x, u, v;
  double lhs;  // H(x, u)
  double rhs;  // H(x + u, v) + H(x, u + v)
};

struct HypothesisReport {
  std::size_t samples = 0;
  std::vector<Violation> violations;
  bool passed() const noexcept { return violations.empty(); }
};

/// Checks H(x,u) <= H(x+u,v) + H(x,u+v) at Halton points (bases 2, 3, 5)
/// of the region; x is spread log-uniformly when x_lo > 0. H is an
/// expression in x and u.
HypothesisReport hi_check(const Expr& h, std::size_t sample_count, const HiRegion& region);

struct MonotonicityReport {
  std::vector<double> xs;
  std::vector<double> values;
  bool nondecreasing = true;
  bool positive = true;
  std::string detail;
  bool holds() const noexcept { return nondecreasing && positive; }
};

struct PointwiseReport {
  bool holds = false;
  std::optional<double> failing_param;
  std::string detail;
};

struct GuctReport {
  HypothesisReport hi;
  MonotonicityReport m_check;
  PointwiseReport pointwise;
  ScanReport scan;  // of G = H m
  bool hypotheses_hold = false;
  bool conclusion_asserted = false;
};

struct GuctSettings {
  ScanSettings scan{};
  std::size_t hi_samples = 1000;
  std::size_t m_density = 8;  // m samples per grid step
};

/// H(x, u) and m(x) combined as G = H m: checks the subadditivity
/// inequality, m positive and nondecreasing, the pointwise limit of G per
/// u, then scans G. The conclusion is asserted only if all hypotheses hold.
GuctReport guct_diagnose(const Expr& h, const Expr& m, double a, double b,
                         const GeometricGrid& grid, std::size_t u_count,
                         const GuctSettings& settings = {});

struct ClosureReport {
  double lambda = 0.0, mu = 0.0;
  std::vector<double> xs;
  std::vector<double> first;   // (f(λx) - f(x)) ln x
  std::vector<double> second;  // (f(μλx) - f(λx)) ln x
  std::vector<double> third;   // (f(λμx) - f(x)) ln x
  double max_identity_ulps = 0.0;  // of |third - (first + second)|
  bool identity_holds = false;     // within 4 ulps everywhere
  std::optional<LimitVerdict> first_verdict, second_verdict, third_verdict;
};

ClosureReport mult_closure_residual(const Expr& f, double lambda, double mu,
                                    const GeometricGrid& grid, const LimitSettings& settings = {},
                                    const std::string& var = "x");

/// ((a/b)^n, (b/a)^n) for n >= 1, (a, b) for n = 0.
std::pair<double, double> interval_expand(double a, double b, int n);

struct AsymReport {
  double lambda = 0.0, bound = 0.0;
  std::vector<double> xs;
  std::vector<double> lhs;       // ∫_x^{λx} h(t)/t dt
  std::vector<double> rhs;       // ln λ / (ln λ + ln x) ∫_1^x h(t)/t dt
  std::vector<double> residual;  // lhs - rhs
  std::vector<double> i_form;    // ∫_x^{λx} - ln λ / (ln λ + ln x) ∫_1^{λx}
  std::vector<double> lcond;     // (L(h)(λx) - L(h)(x)) ln x
  MembershipResult hypothesis;   // 0 < h <= M on the sampled range
  std::optional<LimitVerdict> residual_verdict, lcond_verdict;
};

AsymReport integral_asym_residual(const Expr& h, double lambda, const GeometricGrid& grid,
                                  double bound, const QuadTolerance& tol = {},
                                  const LimitSettings& settings = {},
                                  const std::string& var = "x");

}  // namespace karamata
