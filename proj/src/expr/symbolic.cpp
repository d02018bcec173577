#include <optional>

#include "lfd/expr.hpp"
#include "node.hpp"

namespace lfd::expr {

namespace {

Expr num(double value) { return Expr::constant(value); }
Expr call(Func func, Expr arg) { return Expr::call(func, std::move(arg)); }

// Value of a constant leaf or of the canonical negative-constant form -(c).
std::optional<double> constant_value(const Expr& e) {
  if (e.kind() == NodeKind::constant) return e.value();
  if (e.kind() == NodeKind::negate && e.operand().kind() == NodeKind::constant) {
    return -e.operand().value();
  }
  return std::nullopt;
}

bool is_constant(const Expr& e, double value) {
  const auto v = constant_value(e);
  return v && *v == value;
}

Expr derive(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::constant:
      return num(0.0);
    case NodeKind::variable:
      return num(e.var() == Var::t ? 1.0 : 0.0);
    case NodeKind::negate:
      return -derive(e.operand());
    case NodeKind::call: {
      const Expr& u = e.operand();
      const Expr du = derive(u);
      switch (e.func()) {
        case Func::sin: return call(Func::cos, u) * du;
        case Func::cos: return -call(Func::sin, u) * du;
        case Func::tan: return du / pow(call(Func::cos, u), num(2.0));
        case Func::exp: return call(Func::exp, u) * du;
        case Func::ln: return du / u;
        case Func::sqrt: return du / (num(2.0) * call(Func::sqrt, u));
        // d|u| = u'·u/|u|; undefined (division by zero) where u = 0.
        case Func::abs: return du * (u / call(Func::abs, u));
      }
      break;
    }
    case NodeKind::binary: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      switch (e.op()) {
        case BinaryOp::add: return derive(u) + derive(v);
        case BinaryOp::sub: return derive(u) - derive(v);
        case BinaryOp::mul: return derive(u) * v + u * derive(v);
        case BinaryOp::div:
          return (derive(u) * v - u * derive(v)) / pow(v, num(2.0));
        case BinaryOp::pow: {
          if (!v.depends_on(Var::t)) {
            return v * pow(u, v - num(1.0)) * derive(u);
          }
          if (!u.depends_on(Var::t)) {
            return e * call(Func::ln, u) * derive(v);
          }
          // u^v with both sides varying: differentiate exp(v·ln u).
          const Expr log_u = call(Func::ln, u);
          return call(Func::exp, v * log_u) * (derive(v) * log_u + v * (derive(u) / u));
        }
      }
      break;
    }
  }
  return num(0.0);
}

Expr simplify_node(const Expr& e);

Expr fold_or(const Expr& e, std::optional<double> folded) {
  if (folded) return Expr::constant(*folded);
  return e;
}

std::optional<double> try_fold_binary(BinaryOp op, double a, double b) {
  try {
    return detail::apply_binary(op, a, b, 0);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::optional<double> try_fold_call(Func func, double x) {
  try {
    return detail::apply_call(func, x, 0);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

// Rules applied to a node whose children are already simplified. Each rule
// returns a strictly smaller tree, which is simplified again.
Expr simplify_node(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::variable:
      return e;
    case NodeKind::negate: {
      const Expr& x = e.operand();
      if (is_constant(x, 0.0)) return num(0.0);
      if (x.kind() == NodeKind::negate) return x.operand();
      return e;
    }
    case NodeKind::call: {
      if (const auto c = constant_value(e.operand())) {
        return fold_or(e, try_fold_call(e.func(), *c));
      }
      return e;
    }
    case NodeKind::binary: {
      const Expr& x = e.lhs();
      const Expr& y = e.rhs();
      const auto cx = constant_value(x);
      const auto cy = constant_value(y);
      if (cx && cy) {
        return fold_or(e, try_fold_binary(e.op(), *cx, *cy));
      }
      switch (e.op()) {
        case BinaryOp::add:
          if (is_constant(y, 0.0)) return x;
          if (is_constant(x, 0.0)) return y;
          break;
        case BinaryOp::sub:
          if (is_constant(y, 0.0)) return x;
          if (is_constant(x, 0.0)) return simplify_node(-y);
          break;
        case BinaryOp::mul:
          if (is_constant(x, 0.0) || is_constant(y, 0.0)) return num(0.0);
          if (is_constant(y, 1.0)) return x;
          if (is_constant(x, 1.0)) return y;
          break;
        case BinaryOp::div:
          if (is_constant(y, 1.0)) return x;
          if (is_constant(x, 0.0)) return num(0.0);
          break;
        case BinaryOp::pow:
          if (is_constant(y, 1.0)) return x;
          if (is_constant(y, 0.0)) return num(1.0);
          break;
      }
      return e;
    }
  }
  return e;
}

}  // namespace

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::variable:
      return e;
    case NodeKind::negate:
      return simplify_node(Expr::negate(simplify(e.operand()), e.position()));
    case NodeKind::call:
      return simplify_node(Expr::call(e.func(), simplify(e.operand()), e.position()));
    case NodeKind::binary:
      return simplify_node(
          Expr::binary(e.op(), simplify(e.lhs()), simplify(e.rhs()), e.position()));
  }
  return e;
}

Expr differentiate(const Expr& expr) { return simplify(derive(expr)); }

}  // namespace lfd::expr
