#include "random_expr.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lfd::testing {

using expr::BinaryOp;
using expr::Expr;
using expr::Func;
using expr::Var;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

namespace {

int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

Expr t() { return Expr::variable(Var::t); }
Expr c(double v) { return Expr::constant(v); }

double nice_constant(Rng& rng) {
  // Mix of short decimals and full-precision doubles.
  switch (pick(rng, 4)) {
    case 0: return static_cast<double>(pick(rng, 10));
    case 1: return std::round(uniform(rng, 0.0, 100.0)) / 10.0;
    case 2: return uniform(rng, 0.0, 5.0);
    default: return std::ldexp(uniform(rng, 0.5, 1.0), pick(rng, 80) - 40);
  }
}

}  // namespace

Expr random_tree(Rng& rng, int max_depth) {
  if (max_depth <= 0 || pick(rng, 5) == 0) {
    return pick(rng, 2) == 0 ? t() : c(nice_constant(rng));
  }
  switch (pick(rng, 3)) {
    case 0:
      return Expr::negate(random_tree(rng, max_depth - 1));
    case 1: {
      constexpr std::array ops = {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div,
                                  BinaryOp::pow};
      return Expr::binary(ops[pick(rng, 5)], random_tree(rng, max_depth - 1),
                          random_tree(rng, max_depth - 1));
    }
    default: {
      constexpr std::array funcs = {Func::sin, Func::cos,  Func::tan, Func::exp,
                                    Func::ln,  Func::sqrt, Func::abs};
      return Expr::call(funcs[pick(rng, 7)], random_tree(rng, max_depth - 1));
    }
  }
}

namespace {

double coefficient(Rng& rng) { return std::round(uniform(rng, 0.5, 3.0) * 100.0) / 100.0; }

// Bounded-slope argument for trig functions: |value| and |derivative| stay O(10).
Expr mild(Rng& rng, int depth) {
  if (depth <= 0) return pick(rng, 2) == 0 ? t() : c(coefficient(rng));
  switch (pick(rng, 5)) {
    case 0: return c(coefficient(rng)) * t();
    case 1: return mild(rng, depth - 1) + mild(rng, depth - 1);
    case 2: return Expr::call(Func::sin, mild(rng, depth - 1));
    case 3: return Expr::call(Func::cos, mild(rng, depth - 1));
    default: return t() - mild(rng, depth - 1);
  }
}

// Bounded in [-3, 3].
Expr bounded(Rng& rng, int depth) {
  if (depth <= 0) return c(coefficient(rng));
  return Expr::call(pick(rng, 2) == 0 ? Func::sin : Func::cos, mild(rng, depth - 1));
}

// Bounded below by a positive constant.
Expr positive(Rng& rng, int depth) {
  if (depth <= 0) return c(coefficient(rng));
  const int choice = depth >= 2 ? pick(rng, 3) : 1 + pick(rng, 2);
  switch (choice) {
    case 0: return c(coefficient(rng)) + expr::pow(random_smooth(rng, depth - 2), c(2.0));
    case 1: return Expr::call(Func::exp, bounded(rng, depth - 1));
    default: return c(4.0) + bounded(rng, depth - 1);
  }
}

}  // namespace

int depth(const Expr& e) {
  switch (e.kind()) {
    case expr::NodeKind::constant:
    case expr::NodeKind::variable:
      return 0;
    case expr::NodeKind::negate:
    case expr::NodeKind::call:
      return 1 + depth(e.operand());
    case expr::NodeKind::binary:
      return 1 + std::max(depth(e.lhs()), depth(e.rhs()));
  }
  return 0;
}

Expr random_smooth(Rng& rng, int max_depth) {
  if (max_depth <= 0 || pick(rng, 6) == 0) {
    return pick(rng, 3) == 0 ? c(coefficient(rng)) : t();
  }
  const int d = max_depth - 1;
  switch (pick(rng, 12)) {
    case 0: return random_smooth(rng, d) + random_smooth(rng, d);
    case 1: return random_smooth(rng, d) - random_smooth(rng, d);
    case 2: return random_smooth(rng, d) * random_smooth(rng, d);
    case 3: return random_smooth(rng, d) / positive(rng, d);
    case 4: return -random_smooth(rng, d);
    case 5: return Expr::call(Func::sin, mild(rng, d));
    case 6: return Expr::call(Func::cos, mild(rng, d));
    case 7: return Expr::call(Func::exp, bounded(rng, d));
    case 8: return Expr::call(Func::sqrt, positive(rng, d));
    case 9: return Expr::call(Func::ln, positive(rng, d));
    case 10:
      if (d >= 1) return Expr::call(Func::tan, c(0.4) * bounded(rng, d - 1));
      return Expr::call(Func::sin, t());
    default:
      // Constant integer power, or a positive base to a bounded varying power.
      if (pick(rng, 2) == 0) return expr::pow(random_smooth(rng, d), c(2.0 + pick(rng, 2)));
      return expr::pow(positive(rng, d), bounded(rng, d));
  }
}

std::string random_bytes(Rng& rng, std::size_t max_length) {
  const auto length = static_cast<std::size_t>(pick(rng, static_cast<int>(max_length) + 1));
  std::string s(length, '\0');
  for (char& ch : s) {
    // Half the time pick from the language's alphabet, otherwise any byte.
    static constexpr std::string_view alphabet = "t0123456789.eE+-*/^(), sincoexpltaqrb_y";
    ch = pick(rng, 2) == 0 ? alphabet[static_cast<std::size_t>(pick(rng, static_cast<int>(alphabet.size())))]
                           : static_cast<char>(pick(rng, 256));
  }
  return s;
}

std::string random_token_soup(Rng& rng, std::size_t max_tokens) {
  static constexpr std::array<std::string_view, 24> lexemes = {
      "t", "y", "pi", "e", "1", "2.5", "1e-3", "0", "+", "-", "*", "/", "^", "(", ")", ",",
      "sin", "cos", "exp", "ln", "sqrt", "abs", "tan", "foo"};
  const auto count = static_cast<std::size_t>(pick(rng, static_cast<int>(max_tokens) + 1));
  std::string s;
  for (std::size_t i = 0; i < count; ++i) {
    s += lexemes[static_cast<std::size_t>(pick(rng, static_cast<int>(lexemes.size())))];
    if (pick(rng, 3) == 0) s += ' ';
  }
  return s;
}

}  // namespace lfd::testing
