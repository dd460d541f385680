#pragma once

// Expression language: parse, evaluate, differentiate and print real-valued
// expressions in named variables. Every function handed to the numerical
// modules travels as an Expr.
//
// Grammar (whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'pi' | 'e' | ident | ident '(' args ')' | '(' expr ')'
// Functions: ln exp sin cos sqrt abs (one argument), pow (two arguments).

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "karamata/errors.hpp"

namespace karamata {

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { ln, exp, sin, cos, sqrt, abs, pow };
enum class Symbol { literal, pi, e };

const char* function_name(Function f) noexcept;
std::size_t function_arity(Function f) noexcept;

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  enum class Kind { constant, variable, negate, binary, call };

  /// Numeric literal. Never folds; use `negate` on a literal to obtain a
  /// negative constant.
  static Expr constant(double value);
  static Expr pi();
  static Expr euler();
  static Expr variable(std::string name);
  /// Unary minus. A literal operand folds into a negative literal, which
  /// keeps format/parse round trips structural.
  static Expr negate(Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Function f, std::vector<Expr> args);

  Kind kind() const noexcept;
  double value() const;        // constant
  Symbol symbol() const;       // constant
  const std::string& name() const;  // variable
  BinaryOp op() const;         // binary
  Function function() const;   // call
  std::span<const Expr> children() const noexcept;

  bool is_constant() const noexcept { return kind() == Kind::constant; }
  bool is_literal() const noexcept;
  bool is_literal(double v) const noexcept;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Raw builders (no simplification). Handy in tests and for callers that
// want the tree exactly as written.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Variable bindings. Lookup of an unbound name throws UnboundVariable.
class Env {
 public:
  Env() = default;
  Env(std::initializer_list<std::pair<const std::string, double>> init) : values_(init) {}

  Env& bind(const std::string& name, double value) {
    values_[name] = value;
    return *this;
  }
  double lookup(const std::string& name) const;
  bool contains(const std::string& name) const { return values_.count(name) != 0; }

 private:
  std::map<std::string, double> values_;
};

Expr parse(std::string_view text);
double eval(const Expr& expr, const Env& env);
/// Symbolic derivative with light folding (see `simplify`).
Expr differentiate(const Expr& expr, const std::string& var);
/// Fully parenthesized canonical text; parse(format(e)) == e.
std::string format(const Expr& expr);

/// Local rewrites: literal folding (c1 op c2, f(c)), additive and
/// multiplicative identities, a*(1/a) -> 1, e + e -> 2*e.
Expr simplify(const Expr& expr);

std::set<std::string> free_variables(const Expr& expr);
bool depends_on(const Expr& expr, const std::string& var);

/// Flattened evaluator with variables bound to positional slots. Same
/// semantics and errors as `eval`, without map lookups on the hot path.
class CompiledExpr {
 public:
  CompiledExpr(const Expr& expr, std::vector<std::string> slots);

  double operator()(std::span<const double> args) const;
  double operator()(double a) const { return (*this)(std::span<const double>(&a, 1)); }
  double operator()(double a, double b) const {
    const double args[2] = {a, b};
    return (*this)(std::span<const double>(args, 2));
  }

  const std::vector<std::string>& slots() const noexcept { return slots_; }
  const Expr& source() const noexcept { return source_; }

 private:
  enum class OpCode : unsigned char {
    push_const, push_slot, negate, add, sub, mul, div, pow,
    ln, exp, sin, cos, sqrt, abs
  };
  struct Instr {
    OpCode code;
    std::size_t operand;  // slot index or constant index
    std::size_t subtree;  // index into subtrees_, for error messages
  };

  void emit(const Expr& e);

  Expr source_;
  std::vector<std::string> slots_;
  std::vector<Instr> program_;
  std::vector<double> constants_;
  std::vector<Expr> subtrees_;
  std::size_t max_depth_ = 0;
};

}  // namespace karamata
