#pragma once

#include "foliate/poly.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace foliate {

Poly gcd(const Poly& a, const Poly& b);

namespace detail {

inline Poly leading_coeff_in(const Poly& p, int v) {
  auto cs = p.coefficients_in(v);
  return cs.rbegin()->second;
}

/// gcd of the coefficients of p viewed as a polynomial in x_{v+1}.
inline Poly content_in(const Poly& p, int v) {
  Poly g(p.nvars());
  for (const auto& [k, c] : p.coefficients_in(v)) {
    g = gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

inline Poly primitive_part_in(const Poly& p, int v) {
  if (p.is_zero()) return p;
  auto q = p.divide_exact(content_in(p, v));
  if (!q) throw std::logic_error("content does not divide polynomial");
  return *q;
}

/// Pseudo-remainder of f by g with respect to x_{v+1}.
inline Poly pseudo_remainder(const Poly& f, const Poly& g, int v) {
  const int dg = g.degree_in(v);
  const Poly lc = leading_coeff_in(g, v);
  const Poly xv = Poly::var(f.nvars(), v);
  Poly r = f;
  int e = f.degree_in(v) - dg + 1;
  while (!r.is_zero() && r.degree_in(v) >= dg) {
    int dr = r.degree_in(v);
    Poly s = leading_coeff_in(r, v) * xv.pow(static_cast<unsigned>(dr - dg));
    r = lc * r - s * g;
    --e;
  }
  if (e > 0) r *= lc.pow(static_cast<unsigned>(e));
  return r;
}

/// Primitive remainder sequence for polynomials primitive in x_{v+1}.
inline Poly primitive_prs(Poly f, Poly g, int v) {
  if (f.degree_in(v) < g.degree_in(v)) std::swap(f, g);
  while (!g.is_zero()) {
    if (g.degree_in(v) == 0) return Poly::constant(f.nvars(), Rational(1));
    Poly r = pseudo_remainder(f, g, v);
    f = std::move(g);
    g = primitive_part_in(r, v);
  }
  return primitive_part_in(f, v).monic();
}

}  // namespace detail

/// Greatest common divisor, normalized to grlex leading coefficient 1.
/// gcd(0, 0) = 0.
inline Poly gcd(const Poly& a, const Poly& b) {
  a.same_arity(b);
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  const int n = a.nvars();
  if (a.is_constant() || b.is_constant()) return Poly::constant(n, Rational(1));

  // Recurse on the variable of lowest maximum degree.
  int v = -1;
  int best = 0;
  for (int i = 0; i < n; ++i) {
    int d = std::max(a.degree_in(i), b.degree_in(i));
    if (d > 0 && (v < 0 || d < best)) {
      v = i;
      best = d;
    }
  }
  Poly ca = detail::content_in(a, v);
  Poly cb = detail::content_in(b, v);
  Poly c = gcd(ca, cb);
  Poly pa = *a.divide_exact(ca);
  Poly pb = *b.divide_exact(cb);
  Poly g = (pa.uses_var(v) && pb.uses_var(v)) ? detail::primitive_prs(pa, pb, v)
                                              : Poly::constant(n, Rational(1));
  return (c * g).monic();
}

/// gcd of a nonempty list with at least one nonzero entry.
inline Poly content_gcd(std::span<const Poly> ps) {
  if (ps.empty()) throw std::invalid_argument("content_gcd: empty input");
  Poly g(ps.front().nvars());
  for (const auto& p : ps) {
    g = gcd(g, p);
    if (g.is_constant() && !g.is_zero()) break;
  }
  if (g.is_zero()) throw std::domain_error("content_gcd: all inputs are zero");
  return g;
}

/// True when p has no repeated factor (characteristic zero criterion).
inline bool is_squarefree(const Poly& p) {
  if (p.is_zero()) return false;
  Poly g = p;
  for (int i = 0; i < p.nvars() && !g.is_constant(); ++i) g = gcd(g, p.partial(i));
  return g.is_constant();
}

}  // namespace foliate
