#include "karamata/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

namespace karamata {

struct Expr::Node {
  Kind kind;
  double value = 0.0;
  Symbol symbol = Symbol::literal;
  std::string name;
  BinaryOp op = BinaryOp::add;
  Function function = Function::ln;
  std::vector<Expr> children;
};

const char* function_name(Function f) noexcept {
  switch (f) {
    case Function::ln: return "ln";
    case Function::exp: return "exp";
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::sqrt: return "sqrt";
    case Function::abs: return "abs";
    case Function::pow: return "pow";
  }
  return "?";
}

std::size_t function_arity(Function f) noexcept { return f == Function::pow ? 2 : 1; }

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = std::numbers::pi;
  n->symbol = Symbol::pi;
  return Expr(std::move(n));
}

Expr Expr::euler() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = std::numbers::e;
  n->symbol = Symbol::e;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  if (name.empty()) throw PreconditionError("variable name must be nonempty");
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  if (operand.is_literal()) return constant(-operand.value());
  auto n = std::make_shared<Node>();
  n->kind = Kind::negate;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::binary;
  n->op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::call(Function f, std::vector<Expr> args) {
  if (args.size() != function_arity(f))
    throw PreconditionError(std::string(function_name(f)) + " expects " +
                            std::to_string(function_arity(f)) + " argument(s)");
  auto n = std::make_shared<Node>();
  n->kind = Kind::call;
  n->function = f;
  n->children = std::move(args);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const { return node_->value; }
Symbol Expr::symbol() const { return node_->symbol; }
const std::string& Expr::name() const { return node_->name; }
BinaryOp Expr::op() const { return node_->op; }
Function Expr::function() const { return node_->function; }
std::span<const Expr> Expr::children() const noexcept { return node_->children; }

bool Expr::is_literal() const noexcept {
  return node_->kind == Kind::constant && node_->symbol == Symbol::literal;
}

bool Expr::is_literal(double v) const noexcept { return is_literal() && node_->value == v; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Expr::Kind::constant:
      return x.symbol == y.symbol && x.value == y.value;
    case Expr::Kind::variable:
      return x.name == y.name;
    case Expr::Kind::binary:
      if (x.op != y.op) return false;
      break;
    case Expr::Kind::call:
      if (x.function != y.function) return false;
      break;
    case Expr::Kind::negate:
      break;
  }
  if (x.children.size() != y.children.size()) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (!(x.children[i] == y.children[i])) return false;
  return true;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::div, a, b); }
Expr operator-(const Expr& a) { return Expr::negate(a); }

double Env::lookup(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw UnboundVariable(name);
  return it->second;
}

// ---------------------------------------------------------------- format

namespace {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

const char* op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return " + ";
    case BinaryOp::sub: return " - ";
    case BinaryOp::mul: return " * ";
    case BinaryOp::div: return " / ";
    case BinaryOp::pow: return " ^ ";
  }
  return " ? ";
}

void format_into(const Expr& e, std::string& out, bool top) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      if (e.symbol() == Symbol::pi) {
        out += "pi";
      } else if (e.symbol() == Symbol::e) {
        out += "e";
      } else if (std::signbit(e.value())) {
        out += top ? "-" : "(-";
        out += format_number(-e.value());
        if (!top) out += ')';
      } else {
        out += format_number(e.value());
      }
      return;
    case Expr::Kind::variable:
      out += e.name();
      return;
    case Expr::Kind::negate:
      out += top ? "-" : "(-";
      format_into(e.children()[0], out, false);
      if (!top) out += ')';
      return;
    case Expr::Kind::binary:
      if (!top) out += '(';
      format_into(e.children()[0], out, false);
      out += op_text(e.op());
      format_into(e.children()[1], out, false);
      if (!top) out += ')';
      return;
    case Expr::Kind::call: {
      out += function_name(e.function());
      out += '(';
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first) out += ", ";
        first = false;
        format_into(c, out, true);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string format(const Expr& expr) {
  std::string out;
  format_into(expr, out, true);
  return out;
}

// ---------------------------------------------------------- evaluation

namespace {

template <class Where>
double finite_or_throw(double r, const Where& where) {
  if (!std::isfinite(r)) throw DomainError("non-finite result", where());
  return r;
}

template <class Where>
double apply_binary(BinaryOp op, double a, double b, const Where& where) {
  switch (op) {
    case BinaryOp::add: return finite_or_throw(a + b, where);
    case BinaryOp::sub: return finite_or_throw(a - b, where);
    case BinaryOp::mul: return finite_or_throw(a * b, where);
    case BinaryOp::div:
      if (b == 0.0) throw DomainError("division by zero", where());
      return finite_or_throw(a / b, where);
    case BinaryOp::pow:
      if (a < 0.0 && std::trunc(b) != b)
        throw DomainError("negative base with non-integer exponent", where());
      if (a == 0.0 && b < 0.0) throw DomainError("zero base with negative exponent", where());
      return finite_or_throw(std::pow(a, b), where);
  }
  return 0.0;
}

template <class Where>
double apply_function(Function f, double a, const Where& where) {
  switch (f) {
    case Function::ln:
      if (a <= 0.0) throw DomainError("ln of nonpositive argument", where());
      return std::log(a);
    case Function::exp: return finite_or_throw(std::exp(a), where);
    case Function::sin: return std::sin(a);
    case Function::cos: return std::cos(a);
    case Function::sqrt:
      if (a < 0.0) throw DomainError("sqrt of negative argument", where());
      return std::sqrt(a);
    case Function::abs: return std::fabs(a);
    case Function::pow: break;
  }
  return 0.0;
}

double eval_node(const Expr& e, const Env& env) {
  auto where = [&e] { return format(e); };
  switch (e.kind()) {
    case Expr::Kind::constant: return e.value();
    case Expr::Kind::variable: return env.lookup(e.name());
    case Expr::Kind::negate: return -eval_node(e.children()[0], env);
    case Expr::Kind::binary:
      return apply_binary(e.op(), eval_node(e.children()[0], env),
                          eval_node(e.children()[1], env), where);
    case Expr::Kind::call:
      if (e.function() == Function::pow)
        return apply_binary(BinaryOp::pow, eval_node(e.children()[0], env),
                            eval_node(e.children()[1], env), where);
      return apply_function(e.function(), eval_node(e.children()[0], env), where);
  }
  return 0.0;
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Expr::Kind::variable) out.insert(e.name());
  for (const auto& c : e.children()) collect_variables(c, out);
}

}  // namespace

double eval(const Expr& expr, const Env& env) { return eval_node(expr, env); }

std::set<std::string> free_variables(const Expr& expr) {
  std::set<std::string> out;
  collect_variables(expr, out);
  return out;
}

bool depends_on(const Expr& expr, const std::string& var) {
  if (expr.kind() == Expr::Kind::variable) return expr.name() == var;
  for (const auto& c : expr.children())
    if (depends_on(c, var)) return true;
  return false;
}

// ------------------------------------------------------------ compiled

CompiledExpr::CompiledExpr(const Expr& expr, std::vector<std::string> slots)
    : source_(expr), slots_(std::move(slots)) {
  emit(expr);
  std::size_t depth = 0;
  for (const auto& in : program_) {
    switch (in.code) {
      case OpCode::push_const:
      case OpCode::push_slot:
        max_depth_ = std::max(max_depth_, ++depth);
        break;
      case OpCode::add:
      case OpCode::sub:
      case OpCode::mul:
      case OpCode::div:
      case OpCode::pow:
        --depth;
        break;
      default:
        break;
    }
  }
}

void CompiledExpr::emit(const Expr& e) {
  const std::size_t here = subtrees_.size();
  subtrees_.push_back(e);
  switch (e.kind()) {
    case Expr::Kind::constant:
      constants_.push_back(e.value());
      program_.push_back({OpCode::push_const, constants_.size() - 1, here});
      return;
    case Expr::Kind::variable: {
      auto it = std::find(slots_.begin(), slots_.end(), e.name());
      if (it == slots_.end()) throw UnboundVariable(e.name());
      program_.push_back({OpCode::push_slot, static_cast<std::size_t>(it - slots_.begin()), here});
      return;
    }
    case Expr::Kind::negate:
      emit(e.children()[0]);
      program_.push_back({OpCode::negate, 0, here});
      return;
    case Expr::Kind::binary: {
      emit(e.children()[0]);
      emit(e.children()[1]);
      static constexpr OpCode codes[] = {OpCode::add, OpCode::sub, OpCode::mul, OpCode::div,
                                         OpCode::pow};
      program_.push_back({codes[static_cast<int>(e.op())], 0, here});
      return;
    }
    case Expr::Kind::call: {
      for (const auto& c : e.children()) emit(c);
      static constexpr OpCode codes[] = {OpCode::ln,   OpCode::exp, OpCode::sin, OpCode::cos,
                                         OpCode::sqrt, OpCode::abs, OpCode::pow};
      program_.push_back({codes[static_cast<int>(e.function())], 0, here});
      return;
    }
  }
}

double CompiledExpr::operator()(std::span<const double> args) const {
  if (args.size() < slots_.size())
    throw PreconditionError("compiled expression expects " + std::to_string(slots_.size()) +
                            " argument(s)");
  std::array<double, 64> small{};
  std::vector<double> large;
  double* stack = small.data();
  if (max_depth_ > small.size()) {
    large.resize(max_depth_);
    stack = large.data();
  }
  std::size_t sp = 0;
  for (const auto& in : program_) {
    auto where = [this, &in] { return format(subtrees_[in.subtree]); };
    switch (in.code) {
      case OpCode::push_const: stack[sp++] = constants_[in.operand]; break;
      case OpCode::push_slot: stack[sp++] = args[in.operand]; break;
      case OpCode::negate: stack[sp - 1] = -stack[sp - 1]; break;
      case OpCode::add:
      case OpCode::sub:
      case OpCode::mul:
      case OpCode::div:
      case OpCode::pow: {
        const double b = stack[--sp];
        const double a = stack[sp - 1];
        const auto op = static_cast<BinaryOp>(static_cast<int>(in.code) -
                                              static_cast<int>(OpCode::add));
        stack[sp - 1] = apply_binary(op, a, b, where);
        break;
      }
      default: {
        const auto f = static_cast<Function>(static_cast<int>(in.code) -
                                             static_cast<int>(OpCode::ln));
        stack[sp - 1] = apply_function(f, stack[sp - 1], where);
        break;
      }
    }
  }
  return stack[0];
}

}  // namespace karamata
