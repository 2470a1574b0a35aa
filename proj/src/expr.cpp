#include "lacuna/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace lacuna {

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  TrigPoly parse() {
    TrigPoly p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return p;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool consume_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) == w) {
      std::size_t end = pos_ + w.size();
      if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) {
        return false;
      }
      pos_ = end;
      return true;
    }
    return false;
  }

  std::int64_t parse_exponent() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t digits = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw ParseError("expected an integer exponent", start);
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  TrigPoly parse_expr() {
    TrigPoly acc = parse_term();
    for (;;) {
      if (consume('+')) {
        acc = acc + parse_term();
      } else if (consume('-')) {
        acc = acc - parse_term();
      } else {
        return acc;
      }
    }
  }

  TrigPoly parse_term() {
    TrigPoly acc = parse_factor();
    for (;;) {
      if (consume('*')) {
        acc = multiply(acc, parse_factor());
      } else if (consume('/')) {
        std::size_t at = pos_;
        TrigPoly divisor = parse_factor();
        if (!divisor.is_constant() || divisor.is_zero()) {
          throw ParseError("division requires a nonzero constant divisor", at);
        }
        acc = (Complex(1.0, 0.0) / divisor.coeff(0)) * acc;
      } else {
        return acc;
      }
    }
  }

  TrigPoly parse_factor() {
    if (consume('+')) return parse_factor();
    if (consume('-')) return -parse_factor();
    TrigPoly base = parse_primary();
    if (consume('^')) {
      std::size_t at = pos_;
      std::int64_t e = parse_exponent();
      // Monomial powers stay exact for any integer exponent; general bases
      // must have nonnegative exponents.
      if (base.term_count() == 1) {
        auto [k, c] = *base.coeffs().begin();
        if (e < 0 && std::abs(c) == 0.0) throw ParseError("zero to a negative power", at);
        Complex ce = std::pow(c, static_cast<double>(e));
        return TrigPoly::monomial(k * e, ce);
      }
      if (e < 0) throw ParseError("negative power of a non-monomial", at);
      TrigPoly acc = TrigPoly::constant(Complex(1.0, 0.0));
      for (std::int64_t i = 0; i < e; ++i) acc = multiply(acc, base);
      return acc;
    }
    return base;
  }

  TrigPoly parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    if (consume('(')) {
      TrigPoly inner = parse_expr();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (consume_word("pi")) return TrigPoly::constant(Complex(std::numbers::pi, 0.0));
    if (consume_word("zbar")) return TrigPoly::monomial(-1);
    if (consume_word("z")) return TrigPoly::monomial(1);

    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
              text_[pos_] == 'e' || text_[pos_] == 'E' ||
              ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
               (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
        ++pos_;
      }
      try {
        double v = std::stod(std::string(text_.substr(start, pos_ - start)));
        return TrigPoly::constant(Complex(v, 0.0));
      } catch (const std::exception&) {
        throw ParseError("malformed number", start);
      }
    }
    throw ParseError("unexpected character in function expression", pos_);
  }
};

}  // namespace

TrigPoly parse_function(std::string_view text) { return ExprParser(text).parse(); }

}  // namespace lacuna
