#include "hpt/expression.hpp"

#include <cctype>
#include <string>

#include "hpt/errors.hpp"

namespace hpt {

namespace {

// Scalars are kept apart from space elements so that `1/2*x` and spaces
// without a unit both work.
struct Value {
  bool scalar = true;
  Rational number;
  Element element;
};

class Parser {
 public:
  Parser(const Space& space, std::string_view text) : space_(space), text_(text) {}

  Element run() {
    Value v = expr();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return as_element(v, 0);
  }

 private:
  Element as_element(const Value& v, std::size_t at) const {
    if (!v.scalar) return v.element;
    if (v.number == 0) return space_.zero();
    auto unit = space_.unit();
    if (!unit) throw ParseError("scalar term needs a unit in space '" + space_.name() + "'", at);
    return space_.scale(v.number, *unit);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value add(const Value& a, const Value& b, bool subtract, std::size_t at) const {
    if (a.scalar && b.scalar) return {true, subtract ? Rational(a.number - b.number) : Rational(a.number + b.number), {}};
    const Element rhs = as_element(b, at);
    return {false, 0, subtract ? space_.subtract(as_element(a, at), rhs) : space_.add(as_element(a, at), rhs)};
  }

  Value multiply(const Value& a, const Value& b) const {
    if (a.scalar && b.scalar) return {true, a.number * b.number, {}};
    if (a.scalar) return {false, 0, space_.scale(a.number, b.element)};
    if (b.scalar) return {false, 0, space_.scale(b.number, a.element)};
    return {false, 0, space_.product(a.element, b.element)};
  }

  Value expr() {
    Value v = term();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('+')) {
        v = add(v, term(), false, at);
      } else if (accept('-')) {
        v = add(v, term(), true, at);
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = unary();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('*')) {
        v = multiply(v, unary());
      } else if (accept('/')) {
        Value d = unary();
        if (!d.scalar) throw ParseError("division by a non-scalar", at);
        if (d.number == 0) throw ParseError("division by zero", at);
        Value inv{true, 1 / d.number, {}};
        v = multiply(v, inv);
      } else {
        return v;
      }
    }
  }

  Value unary() {
    if (accept('-')) {
      Value v = unary();
      return multiply(Value{true, -1, {}}, v);
    }
    return power();
  }

  Value power() {
    Value base = primary();
    skip_space();
    const std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_space();
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError("expected a non-negative integer exponent", pos_);
    const std::string exponent_text(text_.substr(digits, pos_ - digits));
    if (exponent_text.size() > 4) throw ParseError("exponent too large", digits);
    const int exponent = std::stoi(exponent_text);
    Value result{true, 1, {}};
    if (!base.scalar && exponent == 0) result = Value{false, 0, as_element(Value{true, 1, {}}, at)};
    for (int i = 0; i < exponent; ++i) result = multiply(result, base);
    return result;
  }

  Value primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return {true, Rational(mpz_class(std::string(text_.substr(start, pos_ - start)), 10)), {}};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      auto gen = space_.generator(name);
      if (!gen) throw ParseError("unknown name '" + std::string(name) + "'", start);
      return {false, 0, *gen};
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  const Space& space_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Element parse_expression(const Space& space, std::string_view text) { return Parser(space, text).run(); }

}  // namespace hpt
