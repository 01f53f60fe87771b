#pragma once

#include "foliate/forms.hpp"

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace foliate {

/// Parse failure with a 0-based character offset into the input.
class ParseError : public std::invalid_argument {
public:
  ParseError(size_t pos, const std::string& what)
      : std::invalid_argument("syntax error at position " + std::to_string(pos) + ": " + what), pos_(pos) {}
  size_t position() const { return pos_; }

private:
  size_t pos_;
};

namespace detail {

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '^') unary)*
//   unary   := '-' unary | power
//   power   := primary ('**' integer)?
//   primary := integer ('/' integer)? | x<i> | z<i> | dx<i> | dz<i> | '(' expr ')'
class FormParser {
public:
  FormParser(std::string_view text, int n) : s_(text), n_(n) {}

  PForm run() {
    PForm v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

private:
  std::string_view s_;
  int n_;
  size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(i_, what); }
  [[noreturn]] void fail_at(size_t pos, const std::string& what) const { throw ParseError(pos, what); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool peek(std::string_view tok) {
    skip();
    return s_.substr(i_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    i_ += tok.size();
    return true;
  }

  std::string digits() {
    skip();
    size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected a number");
    return std::string(s_.substr(start, i_ - start));
  }

  PForm expr() {
    PForm v = term();
    while (true) {
      size_t at = (skip(), i_);
      int sign;
      if (accept("+"))
        sign = 1;
      else if (accept("-"))
        sign = -1;
      else
        return v;
      PForm r = term();
      if (r.degree() != v.degree())
        fail_at(at, "cannot add forms of degree " + std::to_string(v.degree()) + " and " + std::to_string(r.degree()));
      if (sign > 0)
        v += r;
      else
        v -= r;
    }
  }

  PForm term() {
    PForm v = unary();
    while (true) {
      size_t at = (skip(), i_);
      if (peek("**")) return v;
      if (accept("*")) {
        PForm r = unary();
        if (v.degree() > 0 && r.degree() > 0) fail_at(at, "'*' between forms of positive degree; use '^'");
        v = wedge(v, r);
      } else if (accept("^")) {
        PForm r = unary();
        if (v.degree() + r.degree() > n_) fail_at(at, "wedge degree exceeds variable count");
        v = wedge(v, r);
      } else {
        return v;
      }
    }
  }

  PForm unary() {
    if (accept("-")) {
      PForm v = unary();
      v *= Rational(-1);
      return v;
    }
    return power();
  }

  PForm power() {
    PForm base = primary();
    size_t at = (skip(), i_);
    if (!accept("**")) return base;
    if (base.degree() != 0) fail_at(at, "exponent on a form of positive degree");
    std::string e = digits();
    if (e.size() > 4) fail_at(at, "exponent too large");
    return PForm(base.as_poly().pow(static_cast<unsigned>(std::stoul(e))));
  }

  int index_after(size_t prefix) {
    i_ += prefix;
    size_t at = i_;
    std::string d = digits();
    int k = d.size() > 2 ? 0 : std::stoi(d);
    if (k < 1 || k > n_) fail_at(at, "variable index " + d + " out of range 1.." + std::to_string(n_));
    return k - 1;
  }

  PForm primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      PForm v = expr();
      if (!accept(")")) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      if (accept("/")) {
        size_t at = i_;
        std::string den = digits();
        if (den.find_first_not_of('0') == std::string::npos) fail_at(at, "zero denominator");
        num += "/" + den;
      }
      return PForm(Poly::constant(n_, Rational::parse(num)));
    }
    if (c == 'd' && i_ + 1 < s_.size() && (s_[i_ + 1] == 'x' || s_[i_ + 1] == 'z')) return PForm::dx(n_, index_after(2));
    if (c == 'x' || c == 'z') return PForm(Poly::var(n_, index_after(1)));
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace detail

/// Evaluates a form expression on n variables. A zero result takes
/// `degree` when given.
inline PForm parse_form(std::string_view text, int n, std::optional<int> degree = std::nullopt) {
  if (n < 1 || n > kMaxVars) throw std::invalid_argument("parse_form: variable count must be in 1..8");
  PForm v = detail::FormParser(text, n).run();
  if (degree && v.degree() != *degree) {
    if (!v.is_zero()) throw std::invalid_argument("expected a " + std::to_string(*degree) + "-form, got degree " + std::to_string(v.degree()));
    return PForm(n, *degree);
  }
  return v;
}

inline Poly parse_poly(std::string_view text, int n) { return parse_form(text, n, 0).as_poly(); }

/// Comma-separated polynomials, optionally wrapped in parentheses or brackets.
inline std::vector<Poly> parse_poly_list(std::string_view text, int n) {
  std::string_view t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
    t = t.substr(1, t.size() - 2);
  } else if (t.size() >= 2 && t.front() == '(' && t.back() == ')') {
    // Only strip when the parentheses enclose the whole list.
    int depth = 0;
    bool encloses = true;
    for (size_t k = 0; k < t.size(); ++k) {
      depth += t[k] == '(' ? 1 : t[k] == ')' ? -1 : 0;
      if (depth == 0 && k + 1 < t.size()) encloses = false;
    }
    if (encloses) t = t.substr(1, t.size() - 2);
  }
  std::vector<Poly> out;
  int depth = 0;
  size_t start = 0;
  for (size_t k = 0; k <= t.size(); ++k) {
    if (k == t.size() || (t[k] == ',' && depth == 0)) {
      out.push_back(parse_poly(t.substr(start, k - start), n));
      start = k + 1;
    } else if (t[k] == '(') {
      ++depth;
    } else if (t[k] == ')') {
      --depth;
    }
  }
  return out;
}

}  // namespace foliate
