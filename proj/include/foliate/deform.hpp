#pragma once

#include "foliate/divide.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace foliate {

/// Truncated one-parameter family eta_0 + s eta_1 + ... + s^K eta_K.
struct FormFamily {
  std::vector<PForm> eta;

  int order() const { return static_cast<int>(eta.size()) - 1; }

  void check() const {
    if (eta.empty()) throw std::invalid_argument("empty form family");
    for (const auto& e : eta) {
      require_degree(e, 2, "form family");
      require_arity(e, eta.front().nvars(), "form family");
    }
  }
};

/// Coefficient of s^r in a product of two truncated series.
inline PForm series_product(const std::vector<PForm>& a, const std::vector<PForm>& b, int r) {
  PForm out(a.front().nvars(), a.front().degree() + b.front().degree());
  for (int i = 0; i <= r; ++i) {
    int j = r - i;
    if (i < static_cast<int>(a.size()) && j < static_cast<int>(b.size()))
      out += wedge(a[static_cast<size_t>(i)], b[static_cast<size_t>(j)]);
  }
  return out;
}

/// sum_{m+n=r} eta_m ^ eta_n = 0 for r = 0..K.
inline bool family_square_zero_check(const FormFamily& fam) {
  fam.check();
  for (int r = 0; r <= fam.order(); ++r)
    if (!series_product(fam.eta, fam.eta, r).is_zero()) return false;
  return true;
}

/// Raised when an induction step of family_decompose cannot proceed.
class StepFailure : public std::runtime_error {
public:
  enum class Kind { ClaimViolated, Infeasible };

  StepFailure(Kind kind, int order)
      : std::runtime_error(kind == Kind::ClaimViolated
                               ? "claim violated at order " + std::to_string(order)
                               : "Saito step infeasible at order " + std::to_string(order) + " within dmax"),
        kind_(kind),
        order_(order) {}

  Kind kind() const { return kind_; }
  int order() const { return order_; }

private:
  Kind kind_;
  int order_;
};

struct FamilyDecomposition {
  std::vector<PForm> alpha;
  std::vector<PForm> beta;
};

/// Residual eta_r - sum_{i+j=r} alpha_i ^ beta_j for r = 0..K, all zero on success.
inline bool family_residual_zero(const FormFamily& fam, const FamilyDecomposition& dec) {
  for (int r = 0; r <= fam.order(); ++r)
    if (fam.eta[static_cast<size_t>(r)] != series_product(dec.alpha, dec.beta, r)) return false;
  return true;
}

inline FamilyDecomposition family_decompose(const FormFamily& fam, const PForm& alpha0, const PForm& beta0, int dmax) {
  fam.check();
  if (fam.eta.front() != wedge(alpha0, beta0)) throw std::invalid_argument("family_decompose: eta_0 != alpha0 ^ beta0");
  if (!family_square_zero_check(fam)) throw std::invalid_argument("family_decompose: family is not square-zero");
  const PForm ab = wedge(alpha0, beta0);
  FamilyDecomposition dec{{alpha0}, {beta0}};
  for (int l = 1; l <= fam.order(); ++l) {
    PForm mu = fam.eta[static_cast<size_t>(l)];
    for (int i = 1; i < l; ++i) mu -= wedge(dec.alpha[static_cast<size_t>(i)], dec.beta[static_cast<size_t>(l - i)]);
    if (!wedge(ab, mu).is_zero()) throw StepFailure(StepFailure::Kind::ClaimViolated, l);
    auto step = saito_solve(alpha0, beta0, mu, dmax);
    if (!step) throw StepFailure(StepFailure::Kind::Infeasible, l);
    dec.alpha.push_back(step->alpha);
    dec.beta.push_back(step->beta);
  }
  if (!family_residual_zero(fam, dec)) throw std::logic_error("family_decompose: residual is nonzero");
  return dec;
}

using Quad = std::array<int, 4>;

/// Membership in the index set of the involution: i+j+r+s = l, i+j >= 1,
/// r+s >= 1, i != r, j != s, all entries >= 0, at most one entry zero.
inline bool in_s2(int l, const Quad& q) {
  const auto [i, j, r, s] = q;
  if (i < 0 || j < 0 || r < 0 || s < 0) return false;
  if (i + j + r + s != l || i + j < 1 || r + s < 1 || i == r || j == s) return false;
  int zeros = (i == 0) + (j == 0) + (r == 0) + (s == 0);
  return zeros <= 1;
}

inline Quad shuffle_equivalence_check(int l, const Quad& q) {
  if (!in_s2(l, q)) throw std::invalid_argument("shuffle: index tuple not in S2");
  const auto [i, j, r, s] = q;
  if (i == 0 || r == 0) return {i, s, r, j};
  return {r, j, i, s};
}

inline std::vector<Quad> enumerate_s2(int l) {
  std::vector<Quad> out;
  for (int i = 0; i <= l; ++i)
    for (int j = 0; i + j <= l; ++j)
      for (int r = 0; i + j + r <= l; ++r) {
        Quad q{i, j, r, l - i - j - r};
        if (in_s2(l, q)) out.push_back(q);
      }
  return out;
}

/// sum over S2 of alpha_i ^ beta_j ^ alpha_r ^ beta_s.
inline PForm sigma_s2(int l, const std::vector<PForm>& alpha, const std::vector<PForm>& beta) {
  const int n = alpha.front().nvars();
  PForm out(n, std::min(4, n));
  for (const auto& q : enumerate_s2(l)) {
    std::array<PForm, 4> f{alpha[static_cast<size_t>(q[0])], beta[static_cast<size_t>(q[1])],
                           alpha[static_cast<size_t>(q[2])], beta[static_cast<size_t>(q[3])]};
    out += wedge_all(f);
  }
  return out;
}

}  // namespace foliate
