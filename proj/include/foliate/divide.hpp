#pragma once

#include "foliate/gcd.hpp"
#include "foliate/linalg.hpp"
#include "foliate/predicates.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace foliate {

/// Unknown polynomial coefficients laid out as linear-system columns.
/// A block is one unknown object (a form or a vector field) with a fixed
/// number of polynomial slots; every slot ranges over the monomials of
/// degree lo..hi. Columns are ordered by monomial degree, then grlex, then
/// block, then slot, so free-variables-zero solutions prefer low degrees.
class Ansatz {
public:
  struct Column {
    int block;
    int slot;
    Monomial m;
  };

  Ansatz(int nvars, std::vector<int> slots_per_block, unsigned lo, unsigned hi)
      : n_(nvars), slots_(std::move(slots_per_block)) {
    for (const auto& m : monomials_up_to(n_, lo, hi))
      for (int b = 0; b < static_cast<int>(slots_.size()); ++b)
        for (int s = 0; s < slots_[static_cast<size_t>(b)]; ++s) cols_.push_back({b, s, m});
  }

  int nvars() const { return n_; }
  size_t size() const { return cols_.size(); }
  const Column& operator[](size_t i) const { return cols_[i]; }
  const std::vector<Column>& columns() const { return cols_; }

  Poly column_poly(size_t i) const { return Poly::term(n_, cols_[i].m, Rational(1)); }

  /// Slot polynomials of one block for a solution vector.
  std::vector<Poly> block_values(const std::vector<Rational>& x, int block) const {
    std::vector<Poly> out(static_cast<size_t>(slots_[static_cast<size_t>(block)]), Poly(n_));
    for (size_t i = 0; i < cols_.size(); ++i) {
      if (cols_[i].block != block || x[i].is_zero()) continue;
      out[static_cast<size_t>(cols_[i].slot)].add_term(cols_[i].m, x[i]);
    }
    return out;
  }

private:
  int n_;
  std::vector<int> slots_;
  std::vector<Column> cols_;
};

/// Linear map from ansatz columns to forms, turned into equations on
/// (index set, monomial) coefficients of the image.
class FormEquations {
public:
  using Image = std::function<PForm(const Ansatz::Column&, const Poly&)>;

  FormEquations(const Ansatz& a, const Image& image) : cols_(a.size()) {
    for (size_t i = 0; i < a.size(); ++i) {
      PForm w = image(a[i], a.column_poly(i));
      for (const auto& [s, f] : w.terms())
        for (const auto& [m, c] : f.terms()) rows_[{s, m}].emplace(i, c);
    }
  }

  /// System A x = rhs.
  SparseSystem system(const PForm& rhs) const {
    SparseSystem sys(cols_);
    std::map<Key, Rational, KeyLess> b;
    for (const auto& [s, f] : rhs.terms())
      for (const auto& [m, c] : f.terms()) b.emplace(Key{s, m}, c);
    for (const auto& [k, row] : rows_) {
      auto it = b.find(k);
      sys.add_row(row, it == b.end() ? Rational(0) : it->second);
      if (it != b.end()) b.erase(it);
    }
    // Right-hand terms no column can reach.
    for (const auto& [k, c] : b) sys.add_row({}, c);
    return sys;
  }

  SparseSystem homogeneous() const {
    SparseSystem sys(cols_);
    for (const auto& [k, row] : rows_) sys.add_row(row);
    return sys;
  }

private:
  using Key = std::pair<IndexSet, Monomial>;
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const {
      if (a.first != b.first) return IndexLess{}(a.first, b.first);
      return GrlexLess{}(a.second, b.second);
    }
  };

  size_t cols_;
  std::map<Key, SparseSystem::Row, KeyLess> rows_;
};

inline PForm one_form_from(int n, const std::vector<Poly>& c) {
  PForm w(n, 1);
  for (int i = 0; i < n; ++i) w.add(index_set({i}), c[static_cast<size_t>(i)]);
  return w;
}

struct SaitoPair {
  PForm alpha;
  PForm beta;
};

/// mu = alpha0 ^ beta' + alpha' ^ beta0 with coefficient degrees <= dmax.
inline std::optional<SaitoPair> saito_solve(const PForm& alpha0, const PForm& beta0, const PForm& mu, int dmax) {
  require_degree(alpha0, 1, "saito_solve");
  require_degree(beta0, 1, "saito_solve");
  require_degree(mu, 2, "saito_solve");
  if (dmax < 0) throw std::invalid_argument("saito_solve: negative degree bound");
  PForm ab = wedge(alpha0, beta0);
  if (ab.is_zero()) throw std::invalid_argument("saito_solve: alpha0 ^ beta0 is zero");
  if (!wedge(ab, mu).is_zero()) throw std::domain_error("necessary condition fails");
  const int n = mu.nvars();
  Ansatz a(n, {n, n}, 0, static_cast<unsigned>(dmax));
  FormEquations eq(a, [&](const Ansatz::Column& c, const Poly& m) {
    PForm w = PForm::term(n, index_set({c.slot}), m);
    return c.block == 0 ? wedge(w, beta0) : wedge(alpha0, w);
  });
  auto x = eq.system(mu).solve();
  if (!x) return std::nullopt;
  SaitoPair r{one_form_from(n, a.block_values(*x, 0)), one_form_from(n, a.block_values(*x, 1))};
  if (wedge(alpha0, r.beta) + wedge(r.alpha, beta0) != mu) throw std::logic_error("saito_solve: verification failed");
  return r;
}

/// Y with eta = i_Y i_X nu, components of degree lo..dmax.
inline std::optional<VField> derham_vector_solve(const PForm& eta, const VField& x, int dmax, int lo = 0) {
  require_degree(eta, 2, "derham_vector_solve");
  require_arity(eta, 4, "derham_vector_solve");
  if (x.nvars() != 4) throw std::invalid_argument("derham_vector_solve: X must have 4 components");
  if (x.is_zero()) throw std::invalid_argument("derham_vector_solve: X is zero");
  if (!interior(x, eta).is_zero()) throw std::domain_error("i_X eta nonzero");
  if (dmax < lo || lo < 0) throw std::invalid_argument("derham_vector_solve: bad degree bounds");
  const PForm ixnu = contract_volume(x);
  Ansatz a(4, {4}, static_cast<unsigned>(lo), static_cast<unsigned>(dmax));
  FormEquations eq(a, [&](const Ansatz::Column& c, const Poly& m) {
    VField y(4);
    y[c.slot] = m;
    return interior(y, ixnu);
  });
  auto sol = eq.system(eta).solve();
  if (!sol) return std::nullopt;
  VField y(a.block_values(*sol, 0));
  if (interior(y, ixnu) != eta) throw std::logic_error("derham_vector_solve: verification failed");
  return y;
}

struct FoliationSearch {
  std::vector<PForm> basis;
  std::vector<PForm> integrable;
  int dmax;
};

/// Basis of {omega : deg <= dmax, omega ^ eta = 0} and its integrable members
/// among basis vectors and pairwise sums.
inline FoliationSearch containing_foliation_search(const PForm& eta, int dmax, size_t max_pairs = 2000) {
  if (eta.is_zero()) throw std::invalid_argument("containing_foliation_search: zero form");
  if (dmax < 0) throw std::invalid_argument("containing_foliation_search: negative degree bound");
  const int n = eta.nvars();
  Ansatz a(n, {n}, 0, static_cast<unsigned>(dmax));
  FormEquations eq(a, [&](const Ansatz::Column& c, const Poly& m) {
    return wedge(PForm::term(n, index_set({c.slot}), m), eta);
  });
  FoliationSearch out{{}, {}, dmax};
  for (const auto& v : eq.homogeneous().nullspace()) {
    PForm w = one_form_from(n, a.block_values(v, 0));
    if (!wedge(w, eta).is_zero()) throw std::logic_error("containing_foliation_search: verification failed");
    out.basis.push_back(std::move(w));
  }
  auto consider = [&](const PForm& w) {
    if (w.is_zero() || !frobenius_integrable1(w)) return;
    for (const auto& u : out.integrable)
      if (u == w) return;
    out.integrable.push_back(w);
  };
  for (const auto& w : out.basis) consider(w);
  size_t pairs = 0;
  for (size_t i = 0; i < out.basis.size() && pairs < max_pairs; ++i)
    for (size_t j = i + 1; j < out.basis.size() && pairs < max_pairs; ++j, ++pairs)
      consider(out.basis[i] + out.basis[j]);
  return out;
}

/// Homogeneous P of degree d with P domega = dP ^ omega, leading coefficient 1.
inline std::optional<Poly> integrating_factor_search(const PForm& omega, int d) {
  require_degree(omega, 1, "integrating_factor_search");
  if (d < 0) throw std::invalid_argument("integrating_factor_search: negative degree");
  if (!frobenius_integrable1(omega)) throw std::domain_error("integrating_factor_search: form is not integrable");
  const int n = omega.nvars();
  const PForm domega = ext_d(omega);
  Ansatz a(n, {1}, static_cast<unsigned>(d), static_cast<unsigned>(d));
  FormEquations eq(a, [&](const Ansatz::Column&, const Poly& m) {
    return domega * m - wedge(foliate::d(m), omega);
  });
  auto ns = eq.homogeneous().nullspace();
  if (ns.empty()) return std::nullopt;
  std::vector<Poly> cands;
  for (const auto& v : ns) cands.push_back(a.block_values(v, 0)[0]);
  std::optional<Poly> pick;
  for (const auto& p : cands)
    if (is_squarefree(p)) {
      pick = p;
      break;
    }
  for (size_t i = 0; i < cands.size() && !pick; ++i)
    for (size_t j = i + 1; j < cands.size() && !pick; ++j)
      if (Poly s = cands[i] + cands[j]; is_squarefree(s)) pick = s;
  Poly p = (pick ? *pick : cands.front()).monic();
  if (domega * p != wedge(foliate::d(p), omega)) throw std::logic_error("integrating_factor_search: verification failed");
  return p;
}

}  // namespace foliate
