#pragma once

// Internal node layout shared by the expression sources.

#include <vector>

#include "lfd/expr.hpp"

namespace lfd::expr {

class Node {
 public:
  NodeKind kind = NodeKind::constant;
  double value = 0.0;
  Var var = Var::t;
  BinaryOp op = BinaryOp::add;
  Func func = Func::sin;
  std::size_t position = 0;
  std::vector<Expr> children;
};

namespace detail {

double apply_binary(BinaryOp op, double lhs, double rhs, std::size_t position);
double apply_call(Func func, double x, std::size_t position);

}  // namespace detail

}  // namespace lfd::expr
