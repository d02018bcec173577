#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "lfd/expr.hpp"

namespace lfd::expr {

namespace {

// Binding powers. Unary minus sits between * and ^ so that -t^2 == -(t^2).
constexpr int kAdditive = 10;
constexpr int kMultiplicative = 20;
constexpr int kUnary = 30;
constexpr int kPower = 40;

constexpr int kMaxDepth = 256;

constexpr std::array<std::pair<std::string_view, Func>, 7> kFunctions = {{
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tan", Func::tan},
    {"exp", Func::exp},
    {"ln", Func::ln},
    {"sqrt", Func::sqrt},
    {"abs", Func::abs},
}};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& [candidate, func] : kFunctions) {
    if (candidate == name) return func;
  }
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view source, ParseOptions options)
      : tokens_(tokenize(source)), options_(options) {}

  Expr parse_all() {
    Expr result = parse_expression(0);
    const Token& tok = peek();
    if (tok.kind != TokenKind::end) {
      throw ParseError("unexpected " + describe(tok) + " after complete expression", tok.position,
                       "operator or end of input");
    }
    return result;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  const Token& advance() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }

  static std::string describe(const Token& tok) {
    switch (tok.kind) {
      case TokenKind::end: return "end of input";
      case TokenKind::number: return "number '" + tok.lexeme + "'";
      case TokenKind::identifier: return "identifier '" + tok.lexeme + "'";
      default: return "'" + tok.lexeme + "'";
    }
  }

  std::string supported_names() const {
    std::string names = options_.allow_y ? "t, y, pi, e" : "t, pi, e";
    for (const auto& entry : kFunctions) {
      names += ", ";
      names += entry.first;
    }
    return names;
  }

  void expect(TokenKind kind, std::string_view what) {
    const Token& tok = peek();
    if (tok.kind != kind) {
      throw ParseError("expected " + std::string(what) + " but found " + describe(tok), tok.position,
                       std::string(what));
    }
    advance();
  }

  static int infix_binding(const Token& tok) {
    if (tok.kind != TokenKind::op) return -1;
    switch (tok.lexeme[0]) {
      case '+':
      case '-': return kAdditive;
      case '*':
      case '/': return kMultiplicative;
      case '^': return kPower;
      default: return -1;
    }
  }

  Expr parse_expression(int min_binding) {
    if (++depth_ > kMaxDepth) {
      throw ParseError("expression nests too deeply", peek().position, "shallower expression");
    }
    Expr lhs = parse_prefix();
    for (;;) {
      const Token& tok = peek();
      const int binding = infix_binding(tok);
      if (binding < 0 || binding <= min_binding) break;
      const std::size_t position = tok.position;
      const char symbol = tok.lexeme[0];
      advance();
      BinaryOp op = BinaryOp::add;
      int rhs_binding = binding;
      switch (symbol) {
        case '+': op = BinaryOp::add; break;
        case '-': op = BinaryOp::sub; break;
        case '*': op = BinaryOp::mul; break;
        case '/': op = BinaryOp::div; break;
        case '^':
          // Right associative: the exponent may itself continue with another ^.
          op = BinaryOp::pow;
          rhs_binding = kPower - 1;
          break;
      }
      Expr rhs = parse_expression(rhs_binding);
      lhs = Expr::binary(op, std::move(lhs), std::move(rhs), position);
    }
    --depth_;
    return lhs;
  }

  Expr parse_prefix() {
    const Token tok = peek();
    switch (tok.kind) {
      case TokenKind::number: {
        advance();
        double value = 0.0;
        const char* first = tok.lexeme.data();
        const char* last = first + tok.lexeme.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
          throw ParseError("number '" + tok.lexeme + "' is not representable", tok.position,
                           "finite number");
        }
        return Expr::constant(value, tok.position);
      }
      case TokenKind::identifier:
        advance();
        return parse_identifier(tok);
      case TokenKind::lparen: {
        advance();
        Expr inner = parse_expression(0);
        expect(TokenKind::rparen, "')'");
        return inner;
      }
      case TokenKind::op:
        if (tok.lexeme == "-") {
          advance();
          return Expr::negate(parse_expression(kUnary), tok.position);
        }
        if (tok.lexeme == "+") {
          advance();
          return parse_expression(kUnary);
        }
        break;
      default:
        break;
    }
    throw ParseError("expected an operand but found " + describe(tok), tok.position,
                     "number, identifier, '(' or unary '-'");
  }

  Expr parse_identifier(const Token& tok) {
    const std::string& name = tok.lexeme;
    if (name == "t") return Expr::variable(Var::t, tok.position);
    if (name == "y" && options_.allow_y) return Expr::variable(Var::y, tok.position);
    if (name == "pi") return Expr::constant(std::numbers::pi, tok.position);
    if (name == "e") return Expr::constant(std::numbers::e, tok.position);
    if (const auto func = lookup_function(name)) {
      expect(TokenKind::lparen, "'(' after function name");
      Expr argument = parse_expression(0);
      if (peek().kind == TokenKind::comma) {
        throw ParseError("function '" + name + "' takes exactly one argument", peek().position, "')'");
      }
      expect(TokenKind::rparen, "')'");
      return Expr::call(*func, std::move(argument), tok.position);
    }
    throw ParseError("unknown identifier '" + name + "'; supported names: " + supported_names(),
                     tok.position, supported_names());
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
  int depth_ = 0;
  ParseOptions options_;
};

}  // namespace

Expr parse(std::string_view source, ParseOptions options) {
  return Parser(source, options).parse_all();
}

}  // namespace lfd::expr
