#include <cctype>
#include <string>

#include "lfd/expr.hpp"

namespace lfd::expr {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::string describe(char c) {
  if (std::isprint(static_cast<unsigned char>(c)) != 0) {
    return std::string("'") + c + "'";
  }
  return "byte 0x" + std::to_string(static_cast<unsigned char>(c));
}

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = source.size();
  while (i < n) {
    const char c = source[i];
    const std::size_t column = i + 1;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(source[i + 1]))) {
      const std::size_t start = i;
      while (i < n && is_digit(source[i])) ++i;
      if (i < n && source[i] == '.') {
        ++i;
        while (i < n && is_digit(source[i])) ++i;
      }
      // An exponent needs at least one digit; otherwise 'e' is left for the identifier rule.
      if (i < n && (source[i] == 'e' || source[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (source[j] == '+' || source[j] == '-')) ++j;
        if (j < n && is_digit(source[j])) {
          i = j;
          while (i < n && is_digit(source[i])) ++i;
        }
      }
      tokens.push_back({TokenKind::number, std::string(source.substr(start, i - start)), column});
      continue;
    }
    if (is_ident_start(c)) {
      const std::size_t start = i;
      while (i < n && is_ident_char(source[i])) ++i;
      tokens.push_back({TokenKind::identifier, std::string(source.substr(start, i - start)), column});
      continue;
    }
    switch (c) {
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
        tokens.push_back({TokenKind::op, std::string(1, c), column});
        break;
      case '(':
        tokens.push_back({TokenKind::lparen, "(", column});
        break;
      case ')':
        tokens.push_back({TokenKind::rparen, ")", column});
        break;
      case ',':
        tokens.push_back({TokenKind::comma, ",", column});
        break;
      default:
        throw ParseError("unexpected character " + describe(c), column,
                         "number, identifier, operator or parenthesis");
    }
    ++i;
  }
  tokens.push_back({TokenKind::end, "", n + 1});
  return tokens;
}

}  // namespace lfd::expr
