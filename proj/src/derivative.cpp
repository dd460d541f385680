#include <cmath>

#include "karamata/expr.hpp"

namespace karamata {
namespace {

Expr lit(double v) { return Expr::constant(v); }

bool all_literal(std::span<const Expr> xs) {
  for (const auto& x : xs)
    if (!x.is_literal()) return false;
  return true;
}

// Folds a literal-only subtree; leaves it alone when evaluation fails (the
// error then surfaces at eval time with its usual message).
Expr fold(const Expr& raw) {
  try {
    return lit(eval(raw, Env{}));
  } catch (const Error&) {
    return raw;
  }
}

bool is_reciprocal_of(const Expr& candidate, const Expr& e) {
  return candidate.kind() == Expr::Kind::binary && candidate.op() == BinaryOp::div &&
         candidate.children()[0].is_literal(1.0) && candidate.children()[1] == e;
}

// c * e  ->  (c, e); plain e -> (1, e)
std::pair<double, Expr> split_coefficient(const Expr& e) {
  if (e.kind() == Expr::Kind::binary && e.op() == BinaryOp::mul && e.children()[0].is_literal())
    return {e.children()[0].value(), e.children()[1]};
  return {1.0, e};
}

Expr s_neg(const Expr& a);
Expr s_mul(const Expr& a, const Expr& b);

Expr s_add(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return fold(a + b);
  if (a.is_literal(0.0)) return b;
  if (b.is_literal(0.0)) return a;
  auto [ca, ea] = split_coefficient(a);
  auto [cb, eb] = split_coefficient(b);
  if (ea == eb) return s_mul(lit(ca + cb), ea);
  if (b.kind() == Expr::Kind::negate) return Expr::binary(BinaryOp::sub, a, b.children()[0]);
  return a + b;
}

Expr s_sub(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return fold(a - b);
  if (b.is_literal(0.0)) return a;
  if (a.is_literal(0.0)) return s_neg(b);
  if (a == b) return lit(0.0);
  return a - b;
}

Expr s_neg(const Expr& a) {
  if (a.kind() == Expr::Kind::negate) return a.children()[0];
  return Expr::negate(a);
}

Expr s_mul(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return fold(a * b);
  if (a.is_literal(0.0) || b.is_literal(0.0)) return lit(0.0);
  if (a.is_literal(1.0)) return b;
  if (b.is_literal(1.0)) return a;
  if (is_reciprocal_of(b, a) || is_reciprocal_of(a, b)) return lit(1.0);
  if (b.is_literal()) return s_mul(b, a);
  if (a.is_literal()) {
    auto [cb, eb] = split_coefficient(b);
    if (cb != 1.0) return s_mul(fold(a * lit(cb)), eb);
  }
  return a * b;
}

Expr s_div(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return fold(a / b);
  if (b.is_literal(1.0)) return a;
  if (a.is_literal(0.0)) return lit(0.0);
  if (a == b) return lit(1.0);
  return a / b;
}

Expr s_pow(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return fold(Expr::binary(BinaryOp::pow, a, b));
  if (b.is_literal(1.0)) return a;
  if (b.is_literal(0.0)) return lit(1.0);
  return Expr::binary(BinaryOp::pow, a, b);
}

Expr s_call(Function f, std::vector<Expr> args) {
  Expr raw = Expr::call(f, std::move(args));
  if (all_literal(raw.children())) return fold(raw);
  return raw;
}

Expr s_ln(const Expr& a) { return s_call(Function::ln, {a}); }

Expr rebuild(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::constant:
    case Expr::Kind::variable:
      return e;
    case Expr::Kind::negate: {
      Expr inner = rebuild(e.children()[0]);
      if (inner.is_literal()) return Expr::negate(inner);
      return s_neg(inner);
    }
    case Expr::Kind::binary: {
      Expr a = rebuild(e.children()[0]);
      Expr b = rebuild(e.children()[1]);
      switch (e.op()) {
        case BinaryOp::add: return s_add(a, b);
        case BinaryOp::sub: return s_sub(a, b);
        case BinaryOp::mul: return s_mul(a, b);
        case BinaryOp::div: return s_div(a, b);
        case BinaryOp::pow: return s_pow(a, b);
      }
      break;
    }
    case Expr::Kind::call: {
      std::vector<Expr> args;
      for (const auto& c : e.children()) args.push_back(rebuild(c));
      return s_call(e.function(), std::move(args));
    }
  }
  return e;
}

// d(a^b) for either spelling of the power.
Expr derive_power(const Expr& whole, const Expr& a, const Expr& b, const std::string& v) {
  const Expr da = differentiate(a, v);
  if (!depends_on(b, v)) return s_mul(s_mul(b, s_pow(a, s_sub(b, lit(1.0)))), da);
  const Expr db = differentiate(b, v);
  if (!depends_on(a, v)) return s_mul(s_mul(whole, s_ln(a)), db);
  return s_mul(whole, s_add(s_mul(db, s_ln(a)), s_div(s_mul(b, da), a)));
}

}  // namespace

Expr simplify(const Expr& expr) { return rebuild(expr); }

Expr differentiate(const Expr& e, const std::string& v) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      return lit(0.0);
    case Expr::Kind::variable:
      return lit(e.name() == v ? 1.0 : 0.0);
    case Expr::Kind::negate:
      return s_neg(differentiate(e.children()[0], v));
    case Expr::Kind::binary: {
      const Expr& a = e.children()[0];
      const Expr& b = e.children()[1];
      switch (e.op()) {
        case BinaryOp::add: return s_add(differentiate(a, v), differentiate(b, v));
        case BinaryOp::sub: return s_sub(differentiate(a, v), differentiate(b, v));
        case BinaryOp::mul:
          return s_add(s_mul(differentiate(a, v), b), s_mul(a, differentiate(b, v)));
        case BinaryOp::div: {
          const Expr da = differentiate(a, v);
          if (!depends_on(b, v)) return s_div(da, b);
          const Expr db = differentiate(b, v);
          return s_div(s_sub(s_mul(da, b), s_mul(a, db)), s_pow(b, lit(2.0)));
        }
        case BinaryOp::pow:
          return derive_power(e, a, b, v);
      }
      break;
    }
    case Expr::Kind::call: {
      const Expr& a = e.children()[0];
      if (e.function() == Function::pow) return derive_power(e, a, e.children()[1], v);
      const Expr da = differentiate(a, v);
      switch (e.function()) {
        case Function::ln: return s_div(da, a);
        case Function::exp: return s_mul(e, da);
        case Function::sin: return s_mul(s_call(Function::cos, {a}), da);
        case Function::cos: return s_mul(s_neg(s_call(Function::sin, {a})), da);
        case Function::sqrt: return s_div(da, s_mul(lit(2.0), e));
        case Function::abs: return s_mul(da, s_div(a, e));
        case Function::pow: break;
      }
      break;
    }
  }
  return lit(0.0);
}

}  // namespace karamata
