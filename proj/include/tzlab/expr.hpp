#pragma once

// Arithmetic recipes for the weights h1, h2, e.g. "1 + 0.5*cos(2*pi*x)".
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | primary
//   primary := number | 'x' | 'y' | 'pi' | ('sin' | 'cos') '(' expr ')' | '(' expr ')'
//
// Numbers use the C locale: digits, optional fraction, optional exponent.

#include "tzlab/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tzlab {

class ExpressionError : public PreconditionError {
 public:
  ExpressionError(const std::string& msg, std::size_t pos)
      : PreconditionError(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class Expression {
 public:
  static Expression parse(std::string_view text) {
    Parser p{text};
    Expression e;
    e.source_ = std::string(text);
    e.root_ = p.expr();
    p.skip_space();
    if (p.pos != text.size()) throw ExpressionError("unexpected '" + std::string(1, text[p.pos]) + "'", p.pos);
    return e;
  }

  double operator()(double x, double y) const { return root_->eval(x, y); }
  const std::string& source() const { return source_; }

 private:
  struct Node {
    enum Kind { constant, var_x, var_y, neg, add, sub, mul, div, sin, cos } kind;
    double value = 0.0;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double x, double y) const {
      switch (kind) {
        case constant: return value;
        case var_x: return x;
        case var_y: return y;
        case neg: return -lhs->eval(x, y);
        case add: return lhs->eval(x, y) + rhs->eval(x, y);
        case sub: return lhs->eval(x, y) - rhs->eval(x, y);
        case mul: return lhs->eval(x, y) * rhs->eval(x, y);
        case div: return lhs->eval(x, y) / rhs->eval(x, y);
        case sin: return std::sin(lhs->eval(x, y));
        case cos: return std::cos(lhs->eval(x, y));
      }
      return 0.0;
    }
  };
  using NodePtr = std::shared_ptr<const Node>;

  static NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
    return std::make_shared<const Node>(Node{k, v, std::move(a), std::move(b)});
  }

  struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    void skip_space() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool accept(char c) {
      skip_space();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    void expect(char c) {
      if (!accept(c)) throw ExpressionError(std::string("expected '") + c + "'", pos);
    }

    NodePtr expr() {
      NodePtr left = term();
      for (;;) {
        if (accept('+')) left = make(Node::add, left, term());
        else if (accept('-')) left = make(Node::sub, left, term());
        else return left;
      }
    }
    NodePtr term() {
      NodePtr left = unary();
      for (;;) {
        if (accept('*')) left = make(Node::mul, left, unary());
        else if (accept('/')) left = make(Node::div, left, unary());
        else return left;
      }
    }
    NodePtr unary() {
      if (accept('-')) return make(Node::neg, unary());
      if (accept('+')) return unary();
      return primary();
    }
    NodePtr primary() {
      skip_space();
      if (pos >= s.size()) throw ExpressionError("unexpected end of expression", pos);
      if (accept('(')) {
        NodePtr inner = expr();
        expect(')');
        return inner;
      }
      const char c = s[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
      if (std::isalpha(static_cast<unsigned char>(c))) {
        const std::size_t start = pos;
        while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
        const std::string_view name = s.substr(start, pos - start);
        if (name == "x") return make(Node::var_x);
        if (name == "y") return make(Node::var_y);
        if (name == "pi") return make(Node::constant, nullptr, nullptr, std::numbers::pi);
        if (name == "sin" || name == "cos") {
          expect('(');
          NodePtr arg = expr();
          expect(')');
          return make(name == "sin" ? Node::sin : Node::cos, arg);
        }
        throw ExpressionError("unknown identifier '" + std::string(name) + "'", start);
      }
      throw ExpressionError("unexpected '" + std::string(1, c) + "'", pos);
    }
    NodePtr number() {
      double v = 0.0;
      const auto [end, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
      if (ec != std::errc()) throw ExpressionError("malformed number", pos);
      pos = static_cast<std::size_t>(end - s.data());
      return make(Node::constant, nullptr, nullptr, v);
    }
  };

  std::string source_;
  NodePtr root_;
};

}  // namespace tzlab
