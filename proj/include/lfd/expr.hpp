#pragma once

// Expression language for the functions f and custom kernels k.
//
// Grammar, loosest to tightest binding:
//   + -        left associative
//   * /        left associative
//   unary -    so that -t^2 is -(t^2)
//   ^          right associative
//   calls, parentheses, literals
//
// Identifiers: the variable t (and y when ParseOptions::allow_y is set),
// the constants pi and e, and the functions sin cos tan exp ln sqrt abs.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lfd/error.hpp"

namespace lfd::expr {

enum class TokenKind { number, identifier, op, lparen, rparen, comma, end };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;  // 1-based column of the first character
};

/// Splits source text into tokens. Always ends with a TokenKind::end token.
std::vector<Token> tokenize(std::string_view source);

enum class NodeKind { constant, variable, negate, binary, call };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Func { sin, cos, tan, exp, ln, sqrt, abs };
enum class Var { t, y };

std::string_view to_string(Func func) noexcept;
char to_char(BinaryOp op) noexcept;

class Node;

/// Immutable expression tree with shared structure. Copies are cheap.
///
/// Constant nodes always hold finite non-negative values; `Expr::constant`
/// wraps negative values in a negation so that every tree has a textual form
/// that re-parses to the same structure.
class Expr {
 public:
  static Expr constant(double value, std::size_t position = 0);
  static Expr variable(Var var, std::size_t position = 0);
  static Expr negate(Expr operand, std::size_t position = 0);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs, std::size_t position = 0);
  static Expr call(Func func, Expr argument, std::size_t position = 0);

  NodeKind kind() const noexcept;
  double value() const noexcept;  // constant nodes
  Var var() const noexcept;       // variable nodes
  BinaryOp op() const noexcept;   // binary nodes
  Func func() const noexcept;     // call nodes
  std::size_t position() const noexcept;

  /// Operand of negate and call nodes, left operand of binary nodes.
  const Expr& operand() const noexcept;
  const Expr& lhs() const noexcept { return operand(); }
  const Expr& rhs() const noexcept;

  /// True when the tree mentions the given variable anywhere.
  bool depends_on(Var var) const noexcept;

  /// Structural equality; source positions are ignored.
  friend bool operator==(const Expr& a, const Expr& b) noexcept;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);
Expr pow(Expr base, Expr exponent);

struct ParseOptions {
  /// Admit the state variable y (right-hand sides of alpha-ODEs).
  bool allow_y = false;
};

/// Throws ParseError on malformed input, with the column where parsing failed.
Expr parse(std::string_view source, ParseOptions options = {});

struct Bindings {
  double t = 0.0;
  double y = 0.0;
};

/// IEEE double evaluation. Leaving a function's domain (ln of x <= 0,
/// sqrt of x < 0, division by zero, 0 to a negative power, a negative base
/// to a non-integer power) or overflowing throws DomainError instead of
/// producing NaN or infinity.
double evaluate(const Expr& expr, Bindings bindings);
inline double evaluate(const Expr& expr, double t) { return evaluate(expr, Bindings{t, 0.0}); }

/// Symbolic derivative with respect to t, simplified. Other variables are held constant.
Expr differentiate(const Expr& expr);

/// Constant folding plus x+0, x*1, x*0, x^1, x^0 style identities. Idempotent.
Expr simplify(const Expr& expr);

/// Canonical text, e.g. "t + 1", "-(t^2)", "1/(2*sqrt(t))". parse(to_text(e)) == e.
std::string to_text(const Expr& expr);

}  // namespace lfd::expr
