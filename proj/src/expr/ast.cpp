#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lfd/expr.hpp"
#include "node.hpp"

namespace lfd::expr {

std::string_view to_string(Func func) noexcept {
  switch (func) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::tan: return "tan";
    case Func::exp: return "exp";
    case Func::ln: return "ln";
    case Func::sqrt: return "sqrt";
    case Func::abs: return "abs";
  }
  return "?";
}

char to_char(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
  }
  return '?';
}

Expr Expr::constant(double value, std::size_t position) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::invalid_argument, "expression constants must be finite");
  }
  if (value < 0.0) {
    return negate(constant(-value, position), position);
  }
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::constant;
  node->value = value == 0.0 ? 0.0 : value;  // drop the sign of -0.0
  node->position = position;
  return Expr(std::move(node));
}

Expr Expr::variable(Var var, std::size_t position) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::variable;
  node->var = var;
  node->position = position;
  return Expr(std::move(node));
}

Expr Expr::negate(Expr operand, std::size_t position) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::negate;
  node->children.push_back(std::move(operand));
  node->position = position;
  return Expr(std::move(node));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs, std::size_t position) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::binary;
  node->op = op;
  node->children.push_back(std::move(lhs));
  node->children.push_back(std::move(rhs));
  node->position = position;
  return Expr(std::move(node));
}

Expr Expr::call(Func func, Expr argument, std::size_t position) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::call;
  node->func = func;
  node->children.push_back(std::move(argument));
  node->position = position;
  return Expr(std::move(node));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const noexcept { return node_->value; }
Var Expr::var() const noexcept { return node_->var; }
BinaryOp Expr::op() const noexcept { return node_->op; }
Func Expr::func() const noexcept { return node_->func; }
std::size_t Expr::position() const noexcept { return node_->position; }
const Expr& Expr::operand() const noexcept { return node_->children.front(); }
const Expr& Expr::rhs() const noexcept { return node_->children.back(); }

bool Expr::depends_on(Var var) const noexcept {
  if (node_->kind == NodeKind::variable) return node_->var == var;
  for (const Expr& child : node_->children) {
    if (child.depends_on(var)) return true;
  }
  return false;
}

bool operator==(const Expr& a, const Expr& b) noexcept {
  if (a.node_ == b.node_) return true;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.kind != y.kind || x.children.size() != y.children.size()) return false;
  switch (x.kind) {
    case NodeKind::constant:
      if (x.value != y.value) return false;
      break;
    case NodeKind::variable:
      if (x.var != y.var) return false;
      break;
    case NodeKind::binary:
      if (x.op != y.op) return false;
      break;
    case NodeKind::call:
      if (x.func != y.func) return false;
      break;
    case NodeKind::negate:
      break;
  }
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    if (!(x.children[i] == y.children[i])) return false;
  }
  return true;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::negate(std::move(a)); }
Expr pow(Expr base, Expr exponent) {
  return Expr::binary(BinaryOp::pow, std::move(base), std::move(exponent));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

double apply_binary(BinaryOp op, double lhs, double rhs, std::size_t position) {
  double result = 0.0;
  switch (op) {
    case BinaryOp::add: result = lhs + rhs; break;
    case BinaryOp::sub: result = lhs - rhs; break;
    case BinaryOp::mul: result = lhs * rhs; break;
    case BinaryOp::div:
      if (rhs == 0.0) throw DomainError("division by zero", position);
      result = lhs / rhs;
      break;
    case BinaryOp::pow:
      if (lhs == 0.0 && rhs < 0.0) throw DomainError("zero raised to a negative power", position);
      if (lhs < 0.0 && rhs != std::trunc(rhs)) {
        throw DomainError("negative base raised to a non-integer power", position);
      }
      result = std::pow(lhs, rhs);
      break;
  }
  if (!std::isfinite(result)) {
    throw DomainError(std::string("overflow in '") + to_char(op) + "'", position);
  }
  return result;
}

double apply_call(Func func, double x, std::size_t position) {
  double result = 0.0;
  switch (func) {
    case Func::sin: result = std::sin(x); break;
    case Func::cos: result = std::cos(x); break;
    case Func::tan: result = std::tan(x); break;
    case Func::exp: result = std::exp(x); break;
    case Func::ln:
      if (x <= 0.0) throw DomainError("ln of a non-positive value", position);
      result = std::log(x);
      break;
    case Func::sqrt:
      if (x < 0.0) throw DomainError("sqrt of a negative value", position);
      result = std::sqrt(x);
      break;
    case Func::abs: result = std::fabs(x); break;
  }
  if (!std::isfinite(result)) {
    throw DomainError("overflow in " + std::string(to_string(func)), position);
  }
  return result;
}

}  // namespace detail

double evaluate(const Expr& expr, Bindings bindings) {
  switch (expr.kind()) {
    case NodeKind::constant:
      return expr.value();
    case NodeKind::variable:
      return expr.var() == Var::t ? bindings.t : bindings.y;
    case NodeKind::negate:
      return -evaluate(expr.operand(), bindings);
    case NodeKind::binary:
      return detail::apply_binary(expr.op(), evaluate(expr.lhs(), bindings),
                                  evaluate(expr.rhs(), bindings), expr.position());
    case NodeKind::call:
      return detail::apply_call(expr.func(), evaluate(expr.operand(), bindings), expr.position());
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kAtomPrecedence = 100;

int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::variable:
    case NodeKind::call:
      return kAtomPrecedence;
    case NodeKind::negate:
      return 30;
    case NodeKind::binary:
      switch (e.op()) {
        case BinaryOp::add:
        case BinaryOp::sub: return 10;
        case BinaryOp::mul:
        case BinaryOp::div: return 20;
        case BinaryOp::pow: return 40;
      }
  }
  return 0;
}

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(e, out);
  if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::constant:
      out += format_number(e.value());
      return;
    case NodeKind::variable:
      out += e.var() == Var::t ? 't' : 'y';
      return;
    case NodeKind::negate:
      out += "-(";
      print(e.operand(), out);
      out += ')';
      return;
    case NodeKind::call:
      out += to_string(e.func());
      out += '(';
      print(e.operand(), out);
      out += ')';
      return;
    case NodeKind::binary: {
      const int own = precedence(e);
      const int left = precedence(e.lhs());
      const int right = precedence(e.rhs());
      if (e.op() == BinaryOp::pow) {
        print_wrapped(e.lhs(), left <= own, out);
        out += '^';
        print_wrapped(e.rhs(), right < own, out);
        return;
      }
      print_wrapped(e.lhs(), left < own, out);
      switch (e.op()) {
        case BinaryOp::add: out += " + "; break;
        case BinaryOp::sub: out += " - "; break;
        default: out += to_char(e.op()); break;
      }
      print_wrapped(e.rhs(), right <= own || e.rhs().kind() == NodeKind::negate, out);
      return;
    }
  }
}

}  // namespace

std::string to_text(const Expr& expr) {
  std::string out;
  print(expr, out);
  return out;
}

}  // namespace lfd::expr
