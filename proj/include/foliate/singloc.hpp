#pragma once

#include "foliate/gcd.hpp"
#include "foliate/predicates.hpp"
#include "foliate/univariate.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace foliate {

/// Nonzero coefficients of eta, in index-set order.
inline std::vector<Poly> singular_ideal(const PForm& eta) {
  std::vector<Poly> out;
  for (const auto& [s, c] : eta.terms()) out.push_back(c);
  return out;
}

struct Content {
  Poly h;
  PForm reduced;
};

/// eta = h * eta' with h the gcd of the coefficients (monic).
inline Content codim1_content(const PForm& eta) {
  if (eta.is_zero()) throw std::invalid_argument("codim1_content: zero form");
  auto coeffs = singular_ideal(eta);
  Poly h = content_gcd(coeffs);
  if (h.is_constant()) h = Poly::constant(eta.nvars(), Rational(1));
  PForm reduced(eta.nvars(), eta.degree());
  for (const auto& [s, c] : eta.terms()) {
    auto q = c.divide_exact(h);
    if (!q) throw std::logic_error("codim1_content: content does not divide a coefficient");
    reduced.add(s, *q);
  }
  if (reduced * h != eta) throw std::logic_error("codim1_content: reconstruction failed");
  if (eta.degree() == 2 && is_integrable2(eta) && !is_integrable2(reduced))
    throw std::logic_error("codim1_content: reduced form lost integrability");
  return {h, reduced};
}

/// Every coefficient vanishes identically on the line t * v.
inline bool line_in_sing_check(const PForm& eta, std::span<const Rational> v) {
  if (v.size() != static_cast<size_t>(eta.nvars())) throw std::invalid_argument("line_in_sing_check: direction arity mismatch");
  bool nonzero = false;
  for (const auto& c : v) nonzero = nonzero || !c.is_zero();
  if (!nonzero) throw std::invalid_argument("line_in_sing_check: zero direction");
  const std::vector<Rational> origin(v.size(), Rational(0));
  for (const auto& [s, c] : eta.terms())
    if (!uni::along_line(c, origin, v).empty()) return false;
  return true;
}

namespace detail {

inline void require_homogeneous(const std::vector<Poly>& ps, const char* what) {
  for (const auto& p : ps)
    if (!p.is_zero() && !p.homogeneity().homogeneous())
      throw std::invalid_argument(std::string(what) + ": not homogeneous");
}

/// Integer-coefficient copy of a polynomial for fast exact evaluation at
/// integer points; falls back to GMP when 128-bit arithmetic could overflow.
class IntegerEvaluator {
public:
  IntegerEvaluator(const Poly& p, long height) {
    mpz_class l = 1;
    for (const auto& [m, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    mpz_class bound = 0;
    bool small = true;
    for (const auto& [m, c] : p.terms()) {
      mpz_class z = c.num() * (l / c.den());
      mpz_class hp;
      mpz_ui_pow_ui(hp.get_mpz_t(), static_cast<unsigned long>(height), m.degree());
      bound += abs(z) * hp;
      small = small && z.fits_slong_p();
      terms_.push_back({m, z});
    }
    wide_ = small && mpz_sizeinbase(bound.get_mpz_t(), 2) < 120;
  }

  bool zero_at(const std::vector<long>& x) const {
    if (wide_) {
      __int128 s = 0;
      for (const auto& t : terms_) {
        __int128 v = t.c.get_si();
        for (size_t i = 0; i < x.size(); ++i)
          for (unsigned k = 0; k < t.m[static_cast<int>(i)]; ++k) v *= x[i];
        s += v;
      }
      return s == 0;
    }
    mpz_class s = 0;
    for (const auto& t : terms_) {
      mpz_class v = t.c;
      for (size_t i = 0; i < x.size(); ++i)
        for (unsigned k = 0; k < t.m[static_cast<int>(i)]; ++k) v *= x[i];
      s += v;
    }
    return s == 0;
  }

private:
  struct Term {
    Monomial m;
    mpz_class c;
  };
  std::vector<Term> terms_;
  bool wide_ = false;
};

/// Calls f on every primitive integer vector of max-norm exactly h whose
/// first nonzero entry is positive, in lexicographic order.
template <class F>
bool for_each_projective_point(int n, long h, F&& f) {
  std::vector<long> x(static_cast<size_t>(n), -h);
  while (true) {
    long mx = 0;
    long g = 0;
    for (long v : x) {
      mx = std::max(mx, std::labs(v));
      g = std::gcd(g, std::labs(v));
    }
    long first = 0;
    for (long v : x)
      if (v != 0) {
        first = v;
        break;
      }
    if (mx == h && g == 1 && first > 0)
      if (f(x)) return true;
    int i = n - 1;
    while (i >= 0 && x[static_cast<size_t>(i)] == h) x[static_cast<size_t>(i--)] = -h;
    if (i < 0) return false;
    ++x[static_cast<size_t>(i)];
  }
}

inline void check_scan_size(int n, long height) {
  if (height < 1) throw std::invalid_argument("point scan: height must be positive");
  double count = 1;
  for (int i = 0; i < n; ++i) count *= static_cast<double>(2 * height + 1);
  if (count > 2e8) throw std::invalid_argument("point scan: search space too large for height " + std::to_string(height));
}

inline std::vector<Rational> to_rationals(const std::vector<long>& x) {
  std::vector<Rational> out;
  for (long v : x) out.emplace_back(v);
  return out;
}

}  // namespace detail

/// Common zeros among primitive integer points of max-norm <= height, first
/// nonzero coordinate positive, sorted lexicographically.
inline std::vector<std::vector<Rational>> projective_point_scan(const std::vector<Poly>& polys, long height) {
  if (polys.empty()) throw std::invalid_argument("projective_point_scan: empty input");
  detail::require_homogeneous(polys, "projective_point_scan");
  const int n = polys.front().nvars();
  detail::check_scan_size(n, height);
  std::vector<detail::IntegerEvaluator> ev;
  for (const auto& p : polys) ev.emplace_back(p, height);
  std::vector<std::vector<long>> found;
  for (long h = 1; h <= height; ++h)
    detail::for_each_projective_point(n, h, [&](const std::vector<long>& x) {
      for (const auto& e : ev)
        if (!e.zero_at(x)) return false;
      found.push_back(x);
      return false;
    });
  std::sort(found.begin(), found.end());
  std::vector<std::vector<Rational>> out;
  for (const auto& x : found) out.push_back(detail::to_rationals(x));
  return out;
}

/// Certificate from the singular-locus probes. A line or point witness is a
/// direction; a factor witness divides every coefficient.
struct SingCertificate {
  enum class Kind { Line, Point, Codim1Factor, NoneFound };
  Kind kind = Kind::NoneFound;
  std::vector<Rational> direction;
  std::optional<Poly> factor;
  std::string step;
  long height = 0;
  std::vector<std::pair<int, int>> irrational_planes;

  bool verify(const PForm& eta) const {
    switch (kind) {
      case Kind::Line:
        return line_in_sing_check(eta, direction);
      case Kind::Point:
        for (const auto& [s, c] : eta.terms())
          if (!c.evaluate(direction).is_zero()) return false;
        return true;
      case Kind::Codim1Factor:
        if (!factor || factor->is_constant()) return false;
        for (const auto& [s, c] : eta.terms())
          if (!c.divide_exact(*factor)) return false;
        return true;
      case Kind::NoneFound:
        return true;
    }
    return false;
  }
};

inline std::string kind_name(SingCertificate::Kind k) {
  switch (k) {
    case SingCertificate::Kind::Line:
      return "line";
    case SingCertificate::Kind::Point:
      return "point";
    case SingCertificate::Kind::Codim1Factor:
      return "codim1-factor";
    case SingCertificate::Kind::NoneFound:
      return "none-found";
  }
  return "";
}

/// Line through 0 in Sing(eta): coordinate axes, then lines in coordinate
/// 2-planes via gcds of the restricted binary forms, then a direction grid
/// up to `height`.
inline SingCertificate sing_line_search(const PForm& eta, long height = 10) {
  if (!eta.is_zero() && !eta.homogeneity().homogeneous()) throw std::invalid_argument("sing_line_search: not homogeneous");
  const int n = eta.nvars();
  SingCertificate cert;
  cert.height = height;
  auto found = [&](std::vector<Rational> v, const char* step) {
    cert.kind = SingCertificate::Kind::Line;
    cert.direction = std::move(v);
    cert.step = step;
    if (!cert.verify(eta)) throw std::logic_error("sing_line_search: certificate does not verify");
    return cert;
  };
  auto unit = [&](int i) {
    std::vector<Rational> e(static_cast<size_t>(n), Rational(0));
    e[static_cast<size_t>(i)] = Rational(1);
    return e;
  };
  for (int i = 0; i < n; ++i)
    if (line_in_sing_check(eta, unit(i))) return found(unit(i), "axis");

  const auto coeffs = singular_ideal(eta);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      // Restrict to a e_i + e_j; the point e_i itself was covered above.
      uni::UPoly g;
      for (const auto& c : coeffs) {
        g = uni::gcd(g, uni::along_line(c, unit(j), unit(i)));
        if (uni::degree(g) == 0) break;
      }
      if (g.empty() || uni::degree(g) <= 0) continue;
      auto roots = uni::rational_roots(g);
      for (const auto& r : roots) {
        auto v = unit(j);
        v[static_cast<size_t>(i)] = r;
        if (line_in_sing_check(eta, v)) return found(v, "plane");
      }
      uni::UPoly rest = g;
      for (const auto& r : roots) {
        while (uni::eval(rest, r).is_zero()) {
          // Synthetic division by (t - r).
          uni::UPoly q(rest.size() - 1, Rational(0));
          Rational carry(0);
          for (size_t k = rest.size() - 1; k-- > 0;) {
            carry = rest[k + 1] + carry * r;
            q[k] = carry;
          }
          rest = q;
        }
      }
      if (uni::degree(rest) > 0) cert.irrational_planes.emplace_back(i, j);
    }

  if (height >= 1) {
    detail::check_scan_size(n, height);
    std::vector<detail::IntegerEvaluator> ev;
    for (const auto& c : coeffs) ev.emplace_back(c, height);
    std::vector<long> hit;
    for (long h = 1; h <= height && hit.empty(); ++h)
      detail::for_each_projective_point(n, h, [&](const std::vector<long>& x) {
        for (const auto& e : ev)
          if (!e.zero_at(x)) return false;
        hit = x;
        return true;
      });
    if (!hit.empty()) return found(detail::to_rationals(hit), "grid");
  }
  cert.kind = SingCertificate::Kind::NoneFound;
  cert.step = "exhausted";
  return cert;
}

struct QuadricMap {
  Poly a, b, c, e, f, g;
  Poly residual;
};

/// A dx2^dx3 + B dx3^dx1 + C dx1^dx2 + (E dx1 + F dx2 + G dx3)^dx4 and AE + BF + CG.
inline QuadricMap quadric_map(const PForm& eta) {
  require_arity(eta, 4, "quadric_map");
  require_degree(eta, 2, "quadric_map");
  auto co = [&](int i, int j) { return eta.coeff(index_set({i, j})); };
  QuadricMap q{co(1, 2), -co(0, 2), co(0, 1), co(0, 3), co(1, 3), co(2, 3), Poly(4)};
  q.residual = q.a * q.e + q.b * q.f + q.c * q.g;
  return q;
}

}  // namespace foliate
