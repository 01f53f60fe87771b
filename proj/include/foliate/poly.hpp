#pragma once

#include "foliate/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace foliate {

inline constexpr int kMaxVars = 8;

inline void check_arity(int n) {
  if (n < 1 || n > kMaxVars) {
    throw std::invalid_argument("variable count " + std::to_string(n) + " outside 1..8");
  }
}

/// Exponent vector. Unused trailing slots stay zero, so comparisons never
/// need the variable count.
struct Monomial {
  std::array<uint16_t, kMaxVars> e{};

  unsigned degree() const {
    unsigned d = 0;
    for (auto x : e) d += x;
    return d;
  }
  uint16_t operator[](int i) const { return e[static_cast<size_t>(i)]; }
  uint16_t& operator[](int i) { return e[static_cast<size_t>(i)]; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (size_t i = 0; i < kMaxVars; ++i) m.e[i] = static_cast<uint16_t>(a.e[i] + b.e[i]);
    return m;
  }
  bool divides(const Monomial& o) const {
    for (size_t i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  /// o / *this, assuming divides(o).
  Monomial cofactor(const Monomial& o) const {
    Monomial m;
    for (size_t i = 0; i < kMaxVars; ++i) m.e[i] = static_cast<uint16_t>(o.e[i] - e[i]);
    return m;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic order with x1 > x2 > ... ; the map's last element is
/// the leading term.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    for (size_t i = 0; i < kMaxVars; ++i) {
      if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
    }
    return false;
  }
};

enum class HomKind { Zero, Degree, Mixed };

struct Homogeneity {
  HomKind kind = HomKind::Zero;
  unsigned degree = 0;

  bool homogeneous() const { return kind != HomKind::Mixed; }
  bool is(unsigned m) const { return kind == HomKind::Zero || (kind == HomKind::Degree && degree == m); }
};

/// Sparse multivariate polynomial over Q in `nvars` variables x1..xn.
class Poly {
public:
  using TermMap = std::map<Monomial, Rational, GrlexLess>;

  Poly() : Poly(1) {}
  explicit Poly(int nvars) : n_(nvars) { check_arity(nvars); }

  static Poly constant(int nvars, const Rational& c) {
    Poly p(nvars);
    if (!c.is_zero()) p.t_.emplace(Monomial{}, c);
    return p;
  }
  /// The coordinate function x_{i+1} (0-based index).
  static Poly var(int nvars, int i) {
    Poly p(nvars);
    p.check_index(i);
    Monomial m;
    m[i] = 1;
    p.t_.emplace(m, Rational(1));
    return p;
  }
  static Poly term(int nvars, const Monomial& m, const Rational& c) {
    Poly p(nvars);
    for (int i = nvars; i < kMaxVars; ++i)
      if (m[i] != 0) throw std::invalid_argument("monomial uses a variable beyond the arity");
    if (!c.is_zero()) p.t_.emplace(m, c);
    return p;
  }
  /// Linear form sum_i c_i x_i.
  static Poly linear(int nvars, std::span<const Rational> c) {
    Poly p(nvars);
    for (int i = 0; i < nvars && static_cast<size_t>(i) < c.size(); ++i) {
      if (!c[static_cast<size_t>(i)].is_zero()) {
        Monomial m;
        m[i] = 1;
        p.t_.emplace(m, c[static_cast<size_t>(i)]);
      }
    }
    return p;
  }

  int nvars() const { return n_; }
  const TermMap& terms() const { return t_; }
  size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.degree() == 0); }
  Rational constant_term() const {
    auto it = t_.find(Monomial{});
    return it == t_.end() ? Rational(0) : it->second;
  }
  Rational coeff(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Rational(0) : it->second;
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const { return t_.empty() ? -1 : static_cast<int>(t_.rbegin()->first.degree()); }
  int min_degree() const { return t_.empty() ? -1 : static_cast<int>(t_.begin()->first.degree()); }
  int degree_in(int v) const {
    check_index(v);
    int d = t_.empty() ? -1 : 0;
    for (const auto& [m, c] : t_) d = std::max<int>(d, m[v]);
    return d;
  }
  bool uses_var(int v) const { return degree_in(v) > 0; }

  Homogeneity homogeneity() const {
    if (t_.empty()) return {HomKind::Zero, 0};
    unsigned lo = t_.begin()->first.degree();
    unsigned hi = t_.rbegin()->first.degree();
    if (lo != hi) return {HomKind::Mixed, 0};
    return {HomKind::Degree, hi};
  }

  const Monomial& leading_monomial() const {
    if (t_.empty()) throw std::domain_error("leading term of zero polynomial");
    return t_.rbegin()->first;
  }
  const Rational& leading_coeff() const {
    if (t_.empty()) throw std::domain_error("leading term of zero polynomial");
    return t_.rbegin()->second;
  }
  /// Scaled to leading coefficient 1 (zero stays zero).
  Poly monic() const {
    if (t_.empty()) return *this;
    return *this * leading_coeff().inverse();
  }

  Poly homogeneous_part(unsigned d) const {
    Poly p(n_);
    for (const auto& [m, c] : t_)
      if (m.degree() == d) p.t_.emplace_hint(p.t_.end(), m, c);
    return p;
  }

  Poly operator-() const {
    Poly p = *this;
    for (auto& [m, c] : p.t_) c = -c;
    return p;
  }
  Poly& operator+=(const Poly& o) {
    same_arity(o);
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    same_arity(o);
    for (const auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const Rational& s) {
    if (s.is_zero()) {
      t_.clear();
    } else {
      for (auto& [m, c] : t_) c *= s;
    }
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.same_arity(b);
    Poly r(a.n_);
    for (const auto& [ma, ca] : a.t_)
      for (const auto& [mb, cb] : b.t_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly pow(unsigned e) const {
    Poly r = constant(n_, Rational(1));
    Poly b = *this;
    while (e != 0) {
      if (e & 1U) r *= b;
      e >>= 1U;
      if (e != 0) b *= b;
    }
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.n_ == b.n_ && a.t_ == b.t_; }

  /// Formal partial derivative with respect to x_{v+1}.
  Poly partial(int v) const {
    check_index(v);
    Poly r(n_);
    for (const auto& [m, c] : t_) {
      if (m[v] == 0) continue;
      Monomial dm = m;
      dm[v] = static_cast<uint16_t>(dm[v] - 1);
      r.add_term(dm, c * Rational(static_cast<long>(m[v])));
    }
    return r;
  }

  /// Ring homomorphism x_i -> images[i]. All images must share an arity,
  /// which becomes the arity of the result.
  Poly substitute(std::span<const Poly> images) const {
    if (images.size() != static_cast<size_t>(n_)) {
      throw std::invalid_argument("substitute: expected " + std::to_string(n_) + " images, got " +
                                  std::to_string(images.size()));
    }
    int target = images.front().nvars();
    for (const auto& im : images)
      if (im.nvars() != target) throw std::invalid_argument("substitute: images have mixed arity");
    // Powers are cached per variable; the same exponent recurs across terms.
    std::vector<std::map<unsigned, Poly>> cache(static_cast<size_t>(n_));
    auto power = [&](int v, unsigned k) -> const Poly& {
      auto& slot = cache[static_cast<size_t>(v)];
      auto it = slot.find(k);
      if (it != slot.end()) return it->second;
      return slot.emplace(k, images[static_cast<size_t>(v)].pow(k)).first->second;
    };
    Poly r(target);
    for (const auto& [m, c] : t_) {
      Poly acc = constant(target, c);
      for (int v = 0; v < n_ && !acc.is_zero(); ++v)
        if (m[v] != 0) acc *= power(v, m[v]);
      r += acc;
    }
    return r;
  }

  Rational evaluate(std::span<const Rational> point) const {
    if (point.size() != static_cast<size_t>(n_)) throw std::invalid_argument("evaluate: point arity mismatch");
    Rational s(0);
    for (const auto& [m, c] : t_) {
      Rational v = c;
      for (int i = 0; i < n_; ++i)
        if (m[i] != 0) v *= point[static_cast<size_t>(i)].pow(m[i]);
      s += v;
    }
    return s;
  }

  /// Exact quotient by `d`, or nullopt when d does not divide *this.
  std::optional<Poly> divide_exact(const Poly& d) const {
    same_arity(d);
    if (d.is_zero()) throw std::domain_error("division by zero polynomial");
    if (d.is_constant()) return *this * d.constant_term().inverse();
    Poly rem = *this;
    Poly q(n_);
    const Monomial& lm = d.leading_monomial();
    Rational lc_inv = d.leading_coeff().inverse();
    while (!rem.is_zero()) {
      const Monomial& rm = rem.leading_monomial();
      if (!lm.divides(rm)) return std::nullopt;
      Monomial qm = lm.cofactor(rm);
      Rational qc = rem.leading_coeff() * lc_inv;
      q.add_term(qm, qc);
      for (const auto& [m, c] : d.t_) rem.add_term(m * qm, -(c * qc));
    }
    return q;
  }

  /// Coefficients with respect to x_{v+1}: p = sum_k out[k] * x_{v+1}^k.
  std::map<unsigned, Poly> coefficients_in(int v) const {
    check_index(v);
    std::map<unsigned, Poly> out;
    for (const auto& [m, c] : t_) {
      Monomial rest = m;
      unsigned k = rest[v];
      rest[v] = 0;
      auto it = out.try_emplace(k, Poly(n_)).first;
      it->second.add_term(rest, c);
    }
    return out;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = t_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  void check_index(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("variable index " + std::to_string(v) + " out of range");
  }
  void same_arity(const Poly& o) const {
    if (o.n_ != n_) {
      throw std::invalid_argument("variable count mismatch (" + std::to_string(n_) + " vs " +
                                  std::to_string(o.n_) + ")");
    }
  }

  /// Grammar-compatible text, leading term first, e.g. "3/2*x1**2*x2 - x3 + 1".
  std::string str(char var_prefix = 'x') const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      write_term(os, it->first, it->second, first, var_prefix, "");
      first = false;
    }
    return os.str();
  }

  /// Writes "c*mono*suffix" with sign handling; used by the form printer.
  static void write_term(std::ostream& os, const Monomial& m, const Rational& c, bool first, char var_prefix,
                         const std::string& suffix) {
    Rational a = c.abs();
    if (first) {
      if (c.sign() < 0) os << '-';
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    std::vector<std::string> factors;
    if (!a.is_one() || (m.degree() == 0 && suffix.empty())) factors.push_back(a.str());
    for (int i = 0; i < kMaxVars; ++i) {
      if (m[i] == 0) continue;
      std::string f = std::string(1, var_prefix) + std::to_string(i + 1);
      if (m[i] > 1) f += "**" + std::to_string(m[i]);
      factors.push_back(std::move(f));
    }
    if (!suffix.empty()) factors.push_back(suffix);
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i != 0) os << '*';
      os << factors[i];
    }
  }

private:
  int n_;
  TermMap t_;
};

inline Poly operator*(const Poly& a, long s) { return a * Rational(s); }
inline Poly operator*(long s, const Poly& a) { return a * Rational(s); }

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

/// Coordinate functions x1..xn as a vector, handy for identity maps.
inline std::vector<Poly> coordinates(int n) {
  std::vector<Poly> v;
  v.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v.push_back(Poly::var(n, i));
  return v;
}

/// All monomials of total degree exactly d in n variables, ascending grlex.
inline std::vector<Monomial> monomials_of_degree(int n, unsigned d) {
  std::vector<Monomial> out;
  Monomial m;
  auto rec = [&](auto&& self, int v, unsigned left) -> void {
    if (v == n - 1) {
      m[v] = static_cast<uint16_t>(left);
      out.push_back(m);
      m[v] = 0;
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      m[v] = static_cast<uint16_t>(k);
      self(self, v + 1, left - k);
    }
    m[v] = 0;
  };
  rec(rec, 0, d);
  std::sort(out.begin(), out.end(), GrlexLess{});
  return out;
}

/// Monomials with degree in [lo, hi], ascending grlex.
inline std::vector<Monomial> monomials_up_to(int n, unsigned lo, unsigned hi) {
  std::vector<Monomial> out;
  for (unsigned d = lo; d <= hi; ++d) {
    auto part = monomials_of_degree(n, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace foliate
