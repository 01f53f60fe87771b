#pragma once

#include "foliate/poly.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <set>
#include <vector>

namespace foliate::uni {

/// Dense univariate polynomial over Q, coefficient k multiplies t^k.
using UPoly = std::vector<Rational>;

inline void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline int degree(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

inline Rational eval(const UPoly& p, const Rational& t) {
  Rational r(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * t + *it;
  return r;
}

/// Remainder of a modulo b (b nonzero).
inline UPoly rem(UPoly a, const UPoly& b) {
  trim(a);
  const int db = degree(b);
  while (degree(a) >= db && !a.empty()) {
    Rational f = a.back() / b.back();
    int shift = degree(a) - db;
    for (int i = 0; i <= db; ++i) a[static_cast<size_t>(i + shift)] -= f * b[static_cast<size_t>(i)];
    trim(a);
  }
  return a;
}

/// Monic gcd; gcd(0, 0) is the empty polynomial.
inline UPoly gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lc = a.back();
    for (auto& c : a) c /= lc;
  }
  return a;
}

/// Restriction of a polynomial along the affine line x = base + t * dir.
inline UPoly along_line(const Poly& p, std::span<const Rational> base, std::span<const Rational> dir) {
  const int n = p.nvars();
  std::vector<Poly> images;
  images.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Poly im = Poly::constant(1, base[static_cast<size_t>(i)]);
    im += Poly::var(1, 0) * dir[static_cast<size_t>(i)];
    images.push_back(std::move(im));
  }
  Poly u = p.substitute(images);
  UPoly out(static_cast<size_t>(std::max(u.degree(), 0) + 1), Rational(0));
  for (const auto& [m, c] : u.terms()) out[m[0]] = c;
  trim(out);
  return out;
}

namespace detail {

/// Positive divisors of |z| by trial division. Cofactors left after the
/// trial bound are treated as prime.
inline std::vector<mpz_class> divisors(mpz_class z) {
  z = abs(z);
  std::vector<std::pair<mpz_class, unsigned>> fac;
  for (mpz_class p = 2; p * p <= z && p < 1000000; ++p) {
    unsigned k = 0;
    while (z % p == 0) {
      z /= p;
      ++k;
    }
    if (k != 0) fac.emplace_back(p, k);
  }
  if (z > 1) fac.emplace_back(z, 1);
  std::vector<mpz_class> out{1};
  for (const auto& [p, k] : fac) {
    size_t sz = out.size();
    mpz_class pk = 1;
    for (unsigned i = 1; i <= k; ++i) {
      pk *= p;
      for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * pk);
    }
  }
  return out;
}

}  // namespace detail

/// Distinct rational roots, ascending.
inline std::vector<Rational> rational_roots(UPoly p) {
  trim(p);
  std::set<Rational> roots;
  if (p.size() <= 1) return {};
  // Factor out t^k.
  size_t low = 0;
  while (p[low].is_zero()) ++low;
  if (low > 0) {
    roots.insert(Rational(0));
    p.erase(p.begin(), p.begin() + static_cast<long>(low));
  }
  if (p.size() <= 1) return {roots.begin(), roots.end()};
  // Clear denominators.
  mpz_class l = 1;
  for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
  std::vector<mpz_class> z;
  for (const auto& c : p) z.push_back(mpz_class(c.num() * (l / c.den())));
  auto nums = detail::divisors(z.front());
  auto dens = detail::divisors(z.back());
  for (const auto& q : dens) {
    for (const auto& a : nums) {
      for (int s : {1, -1}) {
        Rational cand(mpz_class(a * s), q);
        if (roots.count(cand) != 0) continue;
        if (eval(p, cand).is_zero()) roots.insert(cand);
      }
    }
  }
  return {roots.begin(), roots.end()};
}

}  // namespace foliate::uni
