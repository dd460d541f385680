#pragma once

// Grid-based evidence for x -> ∞ behaviour: limit classification, the
// regular-variation index ρ in F(λx)/F(x) -> λ^ρ, slow variation, and the
// exponent profile ln F(x) / ln x.
//
// All verdicts are falsifiable numerical evidence at the stated grid
// resolution, never proofs. Thresholds are engineering choices.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "karamata/expr.hpp"
#include "karamata/grid.hpp"
#include "karamata/quad.hpp"

namespace karamata {

enum class LimitKind { converges, diverges, oscillates, inconclusive };

const char* to_string(LimitKind kind) noexcept;

struct LimitSettings {
  double tol = 1e-3;                  // final |Δ| for a Converges verdict
  double shrink_factor = 0.9;         // tail |Δ| must shrink at least this much
  double limit_tol = 0.05;            // |limit - target| when matching a value
  double divergence_threshold = 1e6;  // |value| beyond which growth counts as divergence
  bool richardson = false;            // extrapolate in s = 1/ln x (off by default)

  void validate() const;
};

struct LimitVerdict {
  LimitKind kind = LimitKind::inconclusive;
  /// Converges: last sample. DivergesToInfinity: sign (+1 / -1).
  double value = 0.0;
  /// Oscillates: range of the tail.
  double band_lo = 0.0;
  double band_hi = 0.0;
  std::vector<double> tail_residuals;  // |Δ| across the tail
  std::size_t sign_changes = 0;        // of the centered tail
  std::optional<double> extrapolated;  // only with LimitSettings::richardson

  double limit_estimate() const { return extrapolated.value_or(value); }
  bool converges_to(double target, double limit_tol) const;
  std::string describe() const;
};

/// Applies, in order, a divergence test, an oscillation test and a
/// convergence test on the tail (last half) of the samples. Needs >= 8
/// samples with strictly increasing x.
LimitVerdict classify_limit(std::span<const Sample> samples, const LimitSettings& settings = {});

/// ln F evaluated through a log-space rewrite of F where possible
/// (ln(a*b) -> ln a + ln b, ln(a^b) -> b ln a, ...), so large powers do not
/// overflow. Throws PreconditionError when F is not positive at x.
class LogEvaluator {
 public:
  explicit LogEvaluator(const Expr& f, const std::string& var = "x");
  double operator()(double x) const;

 private:
  CompiledExpr direct_;
  CompiledExpr log_form_;
};

/// Rewrites ln(f) in log space; see LogEvaluator.
Expr log_expression(const Expr& f);

enum class VariationKind { yes, no, inconclusive };

struct IndexSettings {
  LimitSettings limit{};
  double spread_tol = 0.05;
  std::size_t workers = 1;
};

struct IndexEstimate {
  double rho_hat = 0.0;
  double spread = 0.0;  // max pairwise deviation across λ at the largest x
  std::vector<double> lambdas;
  std::vector<double> xs;
  std::vector<std::vector<double>> table;  // [λ][x]: ln(F(λx)/F(x)) / ln λ
  std::vector<LimitVerdict> per_lambda;
  VariationKind verdict = VariationKind::inconclusive;  // regularly varying?
  std::string reason;
};

std::vector<double> default_lambdas();  // {π, 2, 10, 1/2}

IndexEstimate rv_index(const Expr& f, std::span<const double> lambdas, const GeometricGrid& grid,
                       const IndexSettings& settings = {}, const std::string& var = "x");
/// Same estimator over an arbitrary ln F.
IndexEstimate rv_index(const std::function<double(double)>& log_f, std::span<const double> lambdas,
                       std::span<const double> xs, const IndexSettings& settings = {});

struct SvPass {
  GeometricGrid grid;
  std::vector<double> xs;
  std::vector<std::vector<double>> log_ratio;  // [λ][x]: ln(F(λx)/F(x))
  std::vector<LimitVerdict> per_lambda;        // of the ratio F(λx)/F(x)
};

struct SvReport {
  VariationKind verdict = VariationKind::inconclusive;  // slowly varying?
  std::string reason;
  std::optional<double> witness_lambda;
  LimitKind witness_kind = LimitKind::inconclusive;
  std::optional<double> index_hint;
  std::vector<double> lambdas;
  std::vector<SvPass> passes;  // the given grid first, then the integer pass
};

/// Slowly varying iff every ratio F(λx)/F(x) converges to 1 on the given
/// grid. A geometric grid is always followed by an integer-mode pass, whose
/// oscillation or divergence also rejects.
SvReport sv_test(const Expr& f, std::span<const double> lambdas, const GeometricGrid& grid,
                 const IndexSettings& settings = {}, const std::string& var = "x");

struct ProfileReport {
  std::vector<double> xs;
  std::vector<double> xi;  // ln F(x) / ln x
  LimitVerdict verdict;
  bool tends_to_zero = false;
};

ProfileReport exponent_profile(const Expr& f, const GeometricGrid& grid,
                               const LimitSettings& settings = {}, const std::string& var = "x");

struct ClaimedClass {
  enum class Kind { zero, slowly_varying, regularly_varying, bounded };
  Kind kind = Kind::zero;
  double alpha = 0.0;       // regularly_varying
  double lo = 0.0, hi = 0.0;  // bounded

  static ClaimedClass zero() { return {Kind::zero}; }
  static ClaimedClass slowly_varying() { return {Kind::slowly_varying}; }
  static ClaimedClass regularly_varying(double alpha) { return {Kind::regularly_varying, alpha}; }
  static ClaimedClass bounded(double lo, double hi) { return {Kind::bounded, 0.0, lo, hi}; }
  /// "Z0", "R0", "R:<alpha>", "B:<lo>:<hi>".
  static ClaimedClass parse(const std::string& text);
  std::string describe() const;
};

struct MembershipResult {
  bool holds = false;
  std::string detail;
};

struct ClassCheckReport {
  ClaimedClass claimed;
  std::vector<double> xs;
  std::vector<double> h_values;
  std::vector<double> operator_values;  // L(h) at xs
  MembershipResult hypothesis;
  MembershipResult conclusion;
  /// False when the hypothesis fails, and for R_alpha with alpha < 0, where
  /// measurements are recorded without being asserted.
  bool conclusion_asserted = false;
};

struct ClassCheckSettings {
  IndexSettings index{};
  QuadTolerance quad{};
};

/// Tests h for membership in the claimed class, then runs the same test on
/// L(h) over the grid, reporting both verdicts separately.
ClassCheckReport class_preservation_check(const Expr& h, const ClaimedClass& claimed,
                                          const GeometricGrid& grid,
                                          std::span<const double> lambdas,
                                          const ClassCheckSettings& settings = {},
                                          const std::string& var = "x");

}  // namespace karamata
