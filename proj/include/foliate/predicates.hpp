#pragma once

#include "foliate/forms.hpp"
#include "foliate/gcd.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace foliate {

/// Polynomial form over a polynomial denominator.
struct MeroForm {
  PForm num;
  Poly den;

  MeroForm(PForm n, Poly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::domain_error("meromorphic form with zero denominator");
    if (den.nvars() != num.nvars()) throw std::invalid_argument("denominator arity mismatch");
  }

  /// Cross-multiplied equality.
  friend bool operator==(const MeroForm& a, const MeroForm& b) {
    return a.num.degree() == b.num.degree() && a.num * b.den == b.num * a.den;
  }
};

/// pivot * eta = omega1 ^ omega2 with omega1 = i_{z1} eta / pivot and
/// omega2 = i_{z2} eta, where pivot = i_{z2} i_{z1} eta.
struct DecompositionWitness {
  MeroForm omega1;
  PForm omega2;
  VField z1;
  VField z2;
  Poly pivot;

  /// Checks the cleared identity pivot * eta = (i_{z1} eta) ^ (i_{z2} eta).
  bool verify(const PForm& eta) const {
    if (pivot.is_zero()) return false;
    if (interior(z2, interior(z1, eta)).as_poly() != pivot) return false;
    if (omega1.num != interior(z1, eta) || omega1.den != pivot) return false;
    if (omega2 != interior(z2, eta)) return false;
    return eta * pivot == wedge(omega1.num, omega2);
  }
};

inline void require_degree(const PForm& w, int p, const char* what) {
  if (w.degree() != p) {
    throw std::invalid_argument(std::string(what) + ": expected a " + std::to_string(p) + "-form, got degree " +
                                std::to_string(w.degree()));
  }
}

inline void require_arity(const PForm& w, int n, const char* what) {
  if (w.nvars() != n) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) + " variables, got " +
                                std::to_string(w.nvars()));
  }
}

inline bool is_decomposable2(const PForm& eta) {
  require_degree(eta, 2, "is_decomposable2");
  return wedge(eta, eta).is_zero();
}

inline DecompositionWitness mero_decompose(const PForm& eta) {
  require_degree(eta, 2, "mero_decompose");
  if (eta.is_zero()) throw std::invalid_argument("mero_decompose: zero form");
  if (!is_decomposable2(eta)) throw std::domain_error("mero_decompose: not decomposable");
  const int n = eta.nvars();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VField z1 = VField::basis(n, j);
      VField z2 = VField::basis(n, i);
      PForm a = interior(z1, eta);
      Poly pivot = interior(z2, a).as_poly();
      if (pivot.is_zero()) continue;
      PForm b = interior(z2, eta);
      DecompositionWitness w{MeroForm(a, pivot), b, z1, z2, pivot};
      if (!w.verify(eta)) throw std::logic_error("mero_decompose: witness identity fails");
      return w;
    }
  throw std::logic_error("mero_decompose: no pivot for a nonzero form");
}

/// Vector field X on C^4 with d(eta) = i_X(dx1^dx2^dx3^dx4).
inline VField rotational4(const PForm& eta) {
  require_arity(eta, 4, "rotational4");
  require_degree(eta, 2, "rotational4");
  PForm de = ext_d(eta);
  VField x(4);
  for (int k = 0; k < 4; ++k) {
    Poly c = de.coeff(static_cast<IndexSet>(0xF & ~(1U << k)));
    x[k] = (k % 2 == 0) ? c : -c;
  }
  return x;
}

inline PForm contract_volume(const VField& x) { return interior(x, PForm::volume(x.nvars())); }

inline bool frobenius_integrable1(const PForm& omega) {
  require_degree(omega, 1, "frobenius_integrable1");
  return wedge(omega, ext_d(omega)).is_zero();
}

inline bool is_integrable2_C4(const PForm& eta) {
  require_arity(eta, 4, "is_integrable2_C4");
  require_degree(eta, 2, "is_integrable2_C4");
  if (eta.is_zero()) return true;
  if (!is_decomposable2(eta)) return false;
  VField x = rotational4(eta);
  if (x.is_zero()) return true;
  return interior(x, eta).is_zero();
}

/// Frobenius for the meromorphic factors of a square-zero 2-form, with
/// denominators cleared: d(i_{z1} eta) ^ eta = d(i_{z2} eta) ^ eta = 0.
inline bool is_integrable2(const PForm& eta) {
  require_degree(eta, 2, "is_integrable2");
  if (eta.is_zero()) return true;
  if (!is_decomposable2(eta)) return false;
  DecompositionWitness w = mero_decompose(eta);
  return wedge(ext_d(w.omega1.num), eta).is_zero() && wedge(ext_d(w.omega2), eta).is_zero();
}

/// Scalar c with a = c * b, if one exists (b nonzero).
inline std::optional<Rational> scalar_ratio(const PForm& a, const PForm& b) {
  if (b.is_zero()) return std::nullopt;
  const auto& [s, f] = *b.terms().begin();
  Poly g = a.coeff(s);
  if (g.is_zero()) return std::nullopt;
  Rational c = g.leading_coeff() / f.leading_coeff();
  if (a == b * c) return c;
  return std::nullopt;
}

inline bool frobenius_integrable_q(const PForm& eta, std::span<const PForm> factors) {
  if (factors.size() != static_cast<size_t>(eta.degree()) || factors.empty())
    throw std::invalid_argument("frobenius_integrable_q: need one factor per degree");
  for (const auto& w : factors) require_degree(w, 1, "frobenius_integrable_q");
  PForm prod = wedge_all(factors);
  if (eta.is_zero() ? !prod.is_zero() : !scalar_ratio(prod, eta))
    throw std::domain_error("factors do not multiply to eta");
  for (const auto& w : factors)
    if (!wedge(ext_d(w), eta).is_zero()) return false;
  return true;
}

inline bool is_dicritical(const PForm& omega) {
  if (omega.degree() == 0) throw std::invalid_argument("is_dicritical: 0-form");
  return interior(radial(omega.nvars()), omega).is_zero();
}

struct Intersection {
  PForm eta;
  Poly f;
  bool complete;
};

/// omegas[0] ^ ... ^ omegas[q-1] = f * eta with eta of trivial content.
inline Intersection complete_intersection(std::span<const PForm> omegas) {
  if (omegas.empty()) throw std::invalid_argument("complete_intersection: empty list");
  for (const auto& w : omegas) {
    require_degree(w, 1, "complete_intersection");
    if (!frobenius_integrable1(w)) throw std::domain_error("complete_intersection: factor not integrable");
  }
  PForm w = wedge_all(omegas);
  if (w.is_zero()) throw std::domain_error("generically dependent");
  std::vector<Poly> cs;
  for (const auto& [s, c] : w.terms()) cs.push_back(c);
  Poly f = content_gcd(cs);
  PForm eta(w.nvars(), w.degree());
  for (const auto& [s, c] : w.terms()) eta.add(s, *c.divide_exact(f));
  return {eta, f, f.is_constant()};
}

/// sum_{i<j} (l_i m_j - l_j m_i) x_1..^x_i..^x_j..x_n dx_i ^ dx_j
inline PForm log_example(std::span<const Rational> lambda, std::span<const Rational> mu) {
  if (lambda.size() != mu.size()) throw std::invalid_argument("log_example: weight lengths differ");
  const int n = static_cast<int>(lambda.size());
  check_arity(n);
  if (n < 2) throw std::invalid_argument("log_example: need at least 2 variables");
  for (int i = 0; i < n; ++i)
    if (lambda[static_cast<size_t>(i)].is_zero() || mu[static_cast<size_t>(i)].is_zero())
      throw std::invalid_argument("log_example: zero weight");
  PForm eta(n, 2);
  bool colinear = true;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Rational c = lambda[static_cast<size_t>(i)] * mu[static_cast<size_t>(j)] -
                   lambda[static_cast<size_t>(j)] * mu[static_cast<size_t>(i)];
      if (c.is_zero()) continue;
      colinear = false;
      Monomial m;
      for (int k = 0; k < n; ++k)
        if (k != i && k != j) m[k] = 1;
      eta.add(index_set({i, j}), Poly::term(n, m, c));
    }
  if (colinear) throw std::domain_error("colinear weights");
  return eta;
}

/// lambda_i mu_j - lambda_j mu_i != 0 for every pair.
inline bool generic_weights(std::span<const Rational> lambda, std::span<const Rational> mu) {
  for (size_t i = 0; i < lambda.size(); ++i)
    for (size_t j = i + 1; j < lambda.size(); ++j)
      if (lambda[i] * mu[j] == lambda[j] * mu[i]) return false;
  return true;
}

/// h divides every coefficient of dh ^ eta.
inline bool invariant_hyperplane(const PForm& eta, const Poly& h) {
  if (h.degree() != 1) throw std::invalid_argument("invariant_hyperplane: h is not linear");
  PForm w = wedge(d(h), eta);
  for (const auto& [s, c] : w.terms())
    if (!c.divide_exact(h)) return false;
  return true;
}

inline bool vanishes_at(const PForm& w, std::span<const Rational> p) {
  for (const auto& [s, c] : w.terms())
    if (!c.evaluate(p).is_zero()) return false;
  return true;
}

inline bool kupka_point(const PForm& omega, std::span<const Rational> p) {
  if (p.size() != static_cast<size_t>(omega.nvars())) throw std::invalid_argument("kupka_point: point arity");
  return vanishes_at(omega, p) && !vanishes_at(ext_d(omega), p);
}

inline bool verify_first_integrals(const PForm& eta, const Poly& f, const Poly& g, const Poly& u) {
  if (u.is_zero()) throw std::invalid_argument("verify_first_integrals: u is zero");
  return eta == wedge(d(f), d(g)) * u;
}

/// Pull-back of i_Z(dx1^dx2^dx3) under the projection C^n -> C^3.
inline PForm tangent_pullback_example(const VField& z, int n) {
  if (z.nvars() != 3) throw std::invalid_argument("tangent_pullback_example: Z must live on 3 variables");
  if (n < 3) throw std::invalid_argument("tangent_pullback_example: n < 3");
  check_arity(n);
  return extend(contract_volume(z), n);
}

}  // namespace foliate
