#pragma once

#include "foliate/forms.hpp"

#include <random>

namespace foliate::gen {

/// Seeded generator for small random polynomials and forms.
class Gen {
public:
  explicit Gen(uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Rational rational(long range = 3) {
    long num = integer(-range, range);
    long den = integer(1, 3);
    return Rational(num, den);
  }

  Rational nonzero(long range = 3) {
    Rational r = rational(range);
    while (r.is_zero()) r = rational(range);
    return r;
  }

  /// Random polynomial with up to `terms` terms of degree <= deg.
  Poly poly(int n, unsigned deg, int terms = 4) {
    Poly p(n);
    auto monos = monomials_up_to(n, 0, deg);
    for (int k = 0; k < terms; ++k) {
      const auto& m = monos[static_cast<size_t>(integer(0, static_cast<long>(monos.size()) - 1))];
      p.add_term(m, rational());
    }
    return p;
  }

  /// Random homogeneous polynomial of degree d.
  Poly homogeneous(int n, unsigned d, int terms = 3) {
    Poly p(n);
    auto monos = monomials_of_degree(n, d);
    for (int k = 0; k < terms; ++k) {
      const auto& m = monos[static_cast<size_t>(integer(0, static_cast<long>(monos.size()) - 1))];
      p.add_term(m, rational());
    }
    return p;
  }

  Poly nonzero_homogeneous(int n, unsigned d, int terms = 3) {
    Poly p = homogeneous(n, d, terms);
    while (p.is_zero()) p = homogeneous(n, d, terms);
    return p;
  }

  /// Random p-form; every coefficient drawn with `poly`.
  PForm form(int n, int p, unsigned deg, int terms = 3) {
    PForm w(n, p);
    auto sets = index_sets(n, p);
    for (auto s : sets)
      if (integer(0, 2) != 0) w.add(s, poly(n, deg, terms));
    return w;
  }

  /// Random p-form with homogeneous coefficients of degree m.
  PForm homogeneous_form(int n, int p, unsigned m, int terms = 2) {
    PForm w(n, p);
    for (auto s : index_sets(n, p))
      if (integer(0, 2) != 0) w.add(s, homogeneous(n, m, terms));
    return w;
  }

  VField field(int n, unsigned deg, int terms = 3) {
    std::vector<Poly> c;
    for (int i = 0; i < n; ++i) c.push_back(poly(n, deg, terms));
    return VField(std::move(c));
  }

  Matrix matrix(size_t r, size_t c, long range = 2) {
    Matrix m(r, c);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) m(i, j) = Rational(integer(-range, range));
    return m;
  }

private:
  std::mt19937_64 rng_;
};

}  // namespace foliate::gen
