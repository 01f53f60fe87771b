#pragma once

#include "foliate/divide.hpp"
#include "foliate/univariate.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace foliate {

using Witness = std::variant<Poly, PForm, VField, PolyMap, Rational, std::vector<Rational>, std::string>;

/// Tagged verdict of the homogeneous classifier with named witness data.
struct ClassificationReport {
  int degree = 0;
  std::string branch;
  std::vector<std::pair<std::string, Witness>> witnesses;
  bool verified = false;

  void add(std::string name, Witness w) { witnesses.emplace_back(std::move(name), std::move(w)); }

  const Witness* find(std::string_view name) const {
    for (const auto& [k, w] : witnesses)
      if (k == name) return &w;
    return nullptr;
  }

  template <class T>
  const T& get(std::string_view name) const {
    const Witness* w = find(name);
    if (!w) throw std::out_of_range("report has no witness " + std::string(name));
    return std::get<T>(*w);
  }
};

namespace detail {

inline std::vector<Rational> linear_coeffs(const Poly& l) {
  std::vector<Rational> c(static_cast<size_t>(l.nvars()), Rational(0));
  for (const auto& [m, v] : l.terms()) {
    if (m.degree() != 1) throw std::invalid_argument("expected a linear form");
    int j = 0;
    while (m[j] == 0) ++j;
    c[static_cast<size_t>(j)] = v;
  }
  return c;
}

/// Rewrites a polynomial that only uses x1..xk as a polynomial in k variables.
inline Poly shrink(const Poly& f, int k) {
  std::vector<Poly> images;
  for (int i = 0; i < f.nvars(); ++i) images.push_back(i < k ? Poly::var(k, i) : Poly(k));
  for (int i = k; i < f.nvars(); ++i)
    if (f.degree_in(i) > 0) throw std::invalid_argument("shrink: polynomial uses a dropped variable");
  return f.substitute(images);
}

inline PForm shrink(const PForm& a, int k) {
  PForm r(k, a.degree());
  const auto keep = static_cast<IndexSet>((1U << k) - 1);
  for (const auto& [s, f] : a.terms()) {
    if ((s & ~keep) != 0) throw std::invalid_argument("shrink: form uses a dropped differential");
    r.add(s, shrink(f, k));
  }
  return r;
}

/// Coefficients c with target = sum_j c_j gens_j, free choices set to zero.
inline std::optional<std::vector<Rational>> express_in(const PForm& target, const std::vector<PForm>& gens) {
  using Key = std::pair<IndexSet, Monomial>;
  auto less = [](const Key& a, const Key& b) {
    if (a.first != b.first) return IndexLess{}(a.first, b.first);
    return GrlexLess{}(a.second, b.second);
  };
  std::map<Key, std::pair<SparseSystem::Row, Rational>, decltype(less)> rows(less);
  for (size_t j = 0; j < gens.size(); ++j)
    for (const auto& [s, f] : gens[j].terms())
      for (const auto& [m, c] : f.terms()) rows[{s, m}].first.emplace(j, c);
  for (const auto& [s, f] : target.terms())
    for (const auto& [m, c] : f.terms()) rows[{s, m}].second = c;
  SparseSystem sys(gens.size());
  for (const auto& [k, r] : rows) sys.add_row(r.first, r.second);
  return sys.solve();
}

/// Coordinates y = T x given by the rows of T; returns the form in y with
/// pullback(linear(T), result) = a.
inline PForm to_coordinates(const PForm& a, const Matrix& t) {
  auto inv = t.inverse();
  if (!inv) throw std::logic_error("coordinate change is singular");
  return pullback(PolyMap::linear(*inv), a);
}

/// Extends independent rows to an invertible square matrix with unit rows.
inline Matrix complete_rows(const std::vector<std::vector<Rational>>& rows, size_t n) {
  std::vector<std::vector<Rational>> all = rows;
  for (size_t j = 0; j < n && all.size() < n; ++j) {
    std::vector<Rational> e(n, Rational(0));
    e[j] = Rational(1);
    Matrix m(all.size() + 1, n);
    all.push_back(e);
    for (size_t i = 0; i < all.size(); ++i)
      for (size_t k = 0; k < n; ++k) m(i, k) = all[i][k];
    if (m.rank() < all.size()) all.pop_back();
  }
  if (all.size() != n) throw std::logic_error("complete_rows: input rows are dependent");
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) m(i, k) = all[i][k];
  return m;
}

inline PolyMap linear_map(int source, const std::vector<std::vector<Rational>>& rows) {
  std::vector<Poly> comps;
  for (const auto& r : rows) comps.push_back(Poly::linear(source, r));
  return PolyMap(source, std::move(comps));
}

}  // namespace detail

/// Distinct linear factors of a homogeneous polynomial (each normalized
/// monic) and the cofactor left after dividing them out with multiplicity.
struct LinearFactorization {
  std::vector<std::pair<Poly, int>> factors;
  Poly cofactor;
};

inline LinearFactorization linear_factors(const Poly& p) {
  if (p.is_zero()) throw std::invalid_argument("linear_factors: zero polynomial");
  if (!p.homogeneity().homogeneous()) throw std::invalid_argument("linear_factors: not homogeneous");
  const int n = p.nvars();
  LinearFactorization out{{}, p};
  if (p.degree() < 1) return out;
  // Direction u with p(u) != 0: unit vectors, then small integer grid.
  std::vector<Rational> u;
  for (int i = 0; i < n && u.empty(); ++i) {
    std::vector<Rational> e(static_cast<size_t>(n), Rational(0));
    e[static_cast<size_t>(i)] = Rational(1);
    if (!p.evaluate(e).is_zero()) u = e;
  }
  for (long t = 2; u.empty(); ++t) {
    std::vector<Rational> v;
    Rational x(1);
    for (int i = 0; i < n; ++i, x *= Rational(t)) v.push_back(x);
    if (!p.evaluate(v).is_zero()) u = v;
  }
  std::vector<std::vector<Rational>> roots;
  for (int k = 0; k < n; ++k) {
    std::vector<Rational> e(static_cast<size_t>(n), Rational(0));
    e[static_cast<size_t>(k)] = Rational(1);
    roots.push_back(uni::rational_roots(uni::along_line(p, e, u)));
    if (roots.back().empty()) return out;
  }
  // A factor l with l(u) = 1 vanishes on t u + e_k at t = -l_k.
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  while (true) {
    std::vector<Rational> c;
    Rational at_u(0);
    for (int k = 0; k < n; ++k) {
      c.push_back(-roots[static_cast<size_t>(k)][idx[static_cast<size_t>(k)]]);
      at_u += c.back() * u[static_cast<size_t>(k)];
    }
    if (at_u == Rational(1)) {
      Poly l = Poly::linear(n, c).monic();
      int mult = 0;
      while (auto q = out.cofactor.divide_exact(l)) {
        out.cofactor = *q;
        ++mult;
      }
      if (mult > 0) out.factors.emplace_back(l, mult);
    }
    int k = 0;
    while (k < n && ++idx[static_cast<size_t>(k)] == roots[static_cast<size_t>(k)].size()) idx[static_cast<size_t>(k++)] = 0;
    if (k == n) break;
  }
  return out;
}

/// omega = (m+2)^{-1} i_R eta for a closed square-zero eta of degree m.
inline PForm dicritical_primitive(const PForm& eta, unsigned m) {
  require_degree(eta, 2, "dicritical_primitive");
  if (!eta.homogeneity().is(m)) throw std::invalid_argument("dicritical_primitive: not homogeneous of the given degree");
  if (!ext_d(eta).is_zero()) throw std::domain_error("not closed");
  if (!is_decomposable2(eta)) throw std::domain_error("not square-zero");
  PForm omega = interior(radial(eta.nvars()), eta) * Rational(1, static_cast<long>(m) + 2);
  if (ext_d(omega) != eta) throw std::logic_error("dicritical_primitive: d(omega) != eta");
  if (!frobenius_integrable1(omega)) throw std::logic_error("dicritical_primitive: omega is not integrable");
  return omega;
}

/// omega = i_R eta for a homogeneous integrable 2-form.
inline PForm radial_contraction(const PForm& eta) {
  require_degree(eta, 2, "radial_contraction");
  if (!eta.homogeneity().homogeneous()) throw std::invalid_argument("radial_contraction: not homogeneous");
  if (!is_integrable2(eta)) throw std::domain_error("not integrable");
  PForm omega = interior(radial(eta.nvars()), eta);
  if (omega.is_zero()) throw std::domain_error("dicritical input");
  if (!frobenius_integrable1(omega)) throw std::logic_error("radial_contraction: omega is not integrable");
  if (!wedge(omega, eta).is_zero()) throw std::logic_error("radial_contraction: omega ^ eta != 0");
  return omega;
}

/// Analysis of a degree-2 form on C^4 whose rotational has rank >= 3.
struct RotationalAnalysis {
  enum class Branch { Commuting, Nilpotent, NilpotentCommuting };
  Branch branch;
  VField x;
  VField y;
  Rational lambda;
  Rational trace_y;
  // Nilpotent branch only.
  Rational rho;
  std::vector<Rational> spectrum;
  Matrix coordinates;  // rows: linear forms x, y, z, w of the normal form
};

inline RotationalAnalysis rank3_rotational_analyze(const PForm& eta) {
  require_arity(eta, 4, "rank3_rotational_analyze");
  require_degree(eta, 2, "rank3_rotational_analyze");
  if (!eta.homogeneity().is(2)) throw std::invalid_argument("rank3_rotational_analyze: not homogeneous of degree 2");
  VField x = rotational4(eta);
  Matrix mx = *x.linear_matrix();
  if (mx.rank() < 3) throw std::domain_error("rank(X) < 3");
  if (!interior(x, eta).is_zero()) throw std::domain_error("i_X eta ≠ 0");
  auto y = derham_vector_solve(eta, x, 1, 1);
  if (!y) throw std::logic_error("rank3_rotational_analyze: no linear Y");
  Matrix my = *y->linear_matrix();
  RotationalAnalysis r{RotationalAnalysis::Branch::Commuting, x, *y, Rational(1) - my.trace(), my.trace(), {}, {}, {}};
  VField xl = x;
  xl *= r.lambda;
  if (bracket(*y, x) != xl) throw std::logic_error("bracket relation fails");
  const bool nilpotent = mx.pow(4).is_zero();
  if (!nilpotent) {
    if (!r.lambda.is_zero()) throw std::logic_error("bracket relation fails");
    if (!bracket(x, *y).is_zero()) throw std::logic_error("bracket relation fails");
    return r;
  }
  if (r.lambda.is_zero()) {
    r.branch = RotationalAnalysis::Branch::NilpotentCommuting;
    return r;
  }
  r.branch = RotationalAnalysis::Branch::Nilpotent;
  auto roots = uni::rational_roots(my.charpoly());
  std::optional<Rational> rho;
  for (const auto& c : roots) {
    bool chain = true;
    for (int k = 1; k < 4 && chain; ++k)
      chain = std::find(roots.begin(), roots.end(), c - r.lambda * Rational(k)) != roots.end();
    if (chain) rho = c;
  }
  if (!rho) throw std::logic_error("rank3_rotational_analyze: spectrum is not an arithmetic chain");
  r.rho = *rho;
  for (int k = 0; k < 4; ++k) r.spectrum.push_back(*rho - r.lambda * Rational(k));
  if (r.rho * Rational(4) - r.lambda * Rational(5) != Rational(1)) throw std::logic_error("4 rho - 5 lambda != 1");
  // Linear forms as coefficient vectors: Y acts by M_Y^T, X by M_X^T.
  Matrix yt = my.transpose(), xt = mx.transpose();
  auto ker = (yt - Matrix::identity(4) * r.spectrum[3]).nullspace();
  if (ker.empty()) throw std::logic_error("rank3_rotational_analyze: missing eigenvector");
  std::vector<Rational> w = ker.front();
  std::vector<std::vector<Rational>> chain{w};
  for (int k = 0; k < 3; ++k) chain.push_back(xt.apply(chain.back()));
  std::reverse(chain.begin(), chain.end());
  Matrix t(4, 4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) t(i, j) = chain[i][j];
  if (t.rank() != 4) throw std::logic_error("rank3_rotational_analyze: normal-form coordinates are singular");
  r.coordinates = t;
  return r;
}

inline std::string branch_name(RotationalAnalysis::Branch b) {
  switch (b) {
    case RotationalAnalysis::Branch::Commuting:
      return "commuting";
    case RotationalAnalysis::Branch::Nilpotent:
      return "nilpotent";
    case RotationalAnalysis::Branch::NilpotentCommuting:
      return "nilpotent commuting";
  }
  return "";
}

/// Diagonal commuting pair X = diag(lambda), Y = diag(mu) on C^4.
struct LogData {
  PForm eta;
  Poly f;
  std::array<std::array<Rational, 4>, 4> rho{};
};

inline LogData case_a_log_data(std::span<const Rational> lambda, std::span<const Rational> mu) {
  if (lambda.size() != 4 || mu.size() != 4) throw std::invalid_argument("case_a_log_data: need 4 weights each");
  Rational sl(0), sm(0);
  for (size_t i = 0; i < 4; ++i) {
    sl += lambda[i];
    sm += mu[i];
  }
  if (!sl.is_zero()) throw std::invalid_argument("case_a_log_data: sum of lambda must be 0");
  if (sm != Rational(1)) throw std::invalid_argument("case_a_log_data: sum of mu must be 1");
  if (!generic_weights(lambda, mu)) throw std::invalid_argument("case_a_log_data: weights not generic");
  Matrix ml(4, 4), mm(4, 4);
  for (size_t i = 0; i < 4; ++i) {
    ml(i, i) = lambda[i];
    mm(i, i) = mu[i];
  }
  LogData out{interior(VField::linear(mm), contract_volume(VField::linear(ml))), Poly::constant(4, Rational(1)), {}};
  for (int i = 0; i < 4; ++i) out.f = out.f * Poly::var(4, i);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      int k = -1, l = -1;
      for (int a = 0; a < 4; ++a)
        if (a != i && a != j) (k < 0 ? k : l) = a;
      Poly c = out.eta.coeff(index_set({i, j}));
      Poly zz = Poly::var(4, k) * Poly::var(4, l);
      auto q = c.divide_exact(zz);
      if (!q || !q->is_constant()) throw std::logic_error("case_a_log_data: coefficient is not a multiple of z_k z_l");
      Rational rij = q->constant_term();
      const auto uk = static_cast<size_t>(k), ul = static_cast<size_t>(l);
      Rational det = lambda[uk] * mu[ul] - lambda[ul] * mu[uk];
      if (rij != det && rij != -det) throw std::logic_error("case_a_log_data: rho_ij mismatch");
      out.rho[static_cast<size_t>(i)][static_cast<size_t>(j)] = rij;
      out.rho[static_cast<size_t>(j)][static_cast<size_t>(i)] = -rij;
    }
  if (ext_d(out.eta) * out.f != wedge(d(out.f), out.eta))
    throw std::logic_error("case_a_log_data: f is not an integrating factor");
  return out;
}

/// Normal-form fixture for the nilpotent branch with 4 rho - 5 lambda = 1.
struct NilpotentFixture {
  Rational rho, lambda;
  VField x, s, r, y;
  PForm alpha, beta, eta;
  Poly g, h;
  Rational a, b, c;
};

inline NilpotentFixture case_b_normal_data(const Rational& rho, const Rational& lambda) {
  if (rho * Rational(4) - lambda * Rational(5) != Rational(1)) throw std::invalid_argument("case_b_normal_data: need 4 rho - 5 lambda = 1");
  const int n = 4;
  auto z = [&](int i) { return Poly::var(n, i - 1); };
  NilpotentFixture fx{rho, lambda, VField(n), VField(n), radial(n), VField(n), PForm(n, 2), PForm(n, 2), PForm(n, 2),
                      Poly(n), Poly(n), rho / Rational(6), (rho - lambda) / Rational(3), (rho - lambda) / Rational(2)};
  fx.x[1] = z(1);
  fx.x[2] = z(2);
  fx.x[3] = z(3);
  for (int j = 2; j <= 4; ++j) fx.s[j - 1] = z(j) * Rational(j - 1);
  fx.y = fx.r;
  fx.y *= rho;
  VField ls = fx.s;
  ls *= lambda;
  fx.y -= ls;
  const PForm ixnu = contract_volume(fx.x);
  fx.alpha = interior(fx.s, ixnu);
  fx.beta = interior(fx.r, ixnu);
  fx.eta = fx.beta * rho - fx.alpha * lambda;
  fx.g = z(2).pow(3) - z(1) * z(2) * z(3) * Rational(3) + z(1).pow(2) * z(4) * Rational(3);
  fx.h = z(2).pow(2) - z(1) * z(3) * Rational(2);
  if (interior(fx.y, ixnu) != fx.eta) throw std::logic_error("case_b_normal_data: eta != i_Y i_X nu");
  const Poly z1 = z(1), gh = fx.g * fx.h;
  const PForm dz1 = d(z1), dg = d(fx.g), dh = d(fx.h);
  // f = gh / z1 is an integrating factor of alpha and beta, cleared by z1^2.
  const PForm df_cleared = d(gh) * z1 - dz1 * gh;
  for (const PForm* w : {&fx.alpha, &fx.beta})
    if (wedge(df_cleared, *w) != ext_d(*w) * (z1 * gh)) throw std::logic_error("case_b_normal_data: integrating factor fails");
  const Poly z1sq = z1 * z1;
  const PForm alpha_log = wedge(dg * (fx.h * Rational(1, 3)) - dh * (fx.g * Rational(1, 2)), dz1);
  if (fx.alpha * z1sq != alpha_log) throw std::logic_error("case_b_normal_data: alpha representation fails");
  if (fx.beta * z1sq != wedge(dh, dg) * (z1 * Rational(1, 6)) + alpha_log)
    throw std::logic_error("case_b_normal_data: beta representation fails");
  PForm rep = wedge(dh, dg) * (z1 * fx.a) + wedge(dg, dz1) * (fx.h * fx.b) + wedge(dz1, dh) * (fx.g * fx.c);
  if (fx.eta * z1sq != rep) throw std::logic_error("case_b_normal_data: logarithmic representation fails");
  return fx;
}

/// eta + s d(i_R eta) stays integrable and keeps its rotational.
inline bool perturbation_integrability(const PForm& eta, std::span<const Rational> samples) {
  require_arity(eta, 4, "perturbation_integrability");
  require_degree(eta, 2, "perturbation_integrability");
  if (!eta.homogeneity().is(2)) throw std::invalid_argument("perturbation_integrability: not homogeneous of degree 2");
  PForm omega = interior(radial(4), eta);
  if (omega.is_zero()) throw std::domain_error("dicritical input");
  const PForm domega = ext_d(omega);
  const VField x = rotational4(eta);
  bool ok = true;
  for (const auto& s : samples) {
    PForm es = eta + domega * s;
    if (rotational4(es) != x) throw std::logic_error("perturbation changes the rotational");
    ok = ok && is_integrable2_C4(es);
  }
  return ok;
}

/// h with Z(h) = a h - q for Z = l1 x d/dx + l2 y d/dy + (a u + q) d/du;
/// q is a quadratic form in (x, y) given on 2 variables.
inline Poly linearize_nonresonant(const Rational& l1, const Rational& l2, const Rational& a, const Poly& q) {
  if (q.nvars() != 2) throw std::invalid_argument("linearize_nonresonant: q must be in 2 variables");
  if (!q.homogeneity().is(2)) throw std::invalid_argument("linearize_nonresonant: q must be quadratic");
  if (l1 * Rational(2) == a || l1 + l2 == a || l2 * Rational(2) == a) throw std::domain_error("resonance");
  Poly h(2);
  for (const auto& [m, c] : q.terms()) h.add_term(m, c / (a - l1 * Rational(m[0]) - l2 * Rational(m[1])));
  VField z2(2);
  z2[0] = Poly::var(2, 0) * l1;
  z2[1] = Poly::var(2, 1) * l2;
  if (z2.apply(h) != h * a - q) throw std::logic_error("linearize_nonresonant: Z(h) != a h - q");
  return h;
}

/// Field Z on (x, y, u) of the non-resonant linearization.
inline VField linearization_field(const Rational& l1, const Rational& l2, const Rational& a, const Poly& q) {
  VField z(3);
  z[0] = Poly::var(3, 0) * l1;
  z[1] = Poly::var(3, 1) * l2;
  z[2] = Poly::var(3, 2) * a + extend(q, 3);
  return z;
}

/// Closed degree-2 components of homogeneous foliations.
enum class Component { R22, R13, L1111, L112, E, S2n };

inline std::string component_name(Component c) {
  switch (c) {
    case Component::R22:
      return "R(2,2)";
    case Component::R13:
      return "R(1,3)";
    case Component::L1111:
      return "L(1,1,1,1)";
    case Component::L112:
      return "L(1,1,2)";
    case Component::E:
      return "E(n-1)";
    case Component::S2n:
      return "S(2,n)";
  }
  return "";
}

/// Polynomials and weights a component check needs:
///   R(2,2): P, Q        R(1,3): L, C        L(1,1,1,1): L1..L4 and 4 weights
///   L(1,1,2): L1, L2, Q and weights (l1, l2, l)   E(n-1): none   S(2,n): P, Q, R
struct ComponentData {
  std::vector<Poly> polys;
  std::vector<Rational> weights;
};

/// Fixed cubic and quadric of the E(n-1) normal form on n >= 4 variables.
inline std::pair<Poly, Poly> exceptional_pair(int n) {
  if (n < 4) throw std::invalid_argument("E(n-1) needs at least 4 variables");
  auto x = [&](int i) { return Poly::var(n, i - 1); };
  Poly c = x(3) * x(4).pow(2) - x(1) * x(2) * x(4) + x(1).pow(3) * Rational(1, 3);
  Poly q = x(2) * x(4) - x(1).pow(2) * Rational(1, 2);
  return {c, q};
}

/// The closed 2-form of the E(n-1) normal form, d((2Q dC - 3C dQ)/x4).
inline PForm exceptional_form(int n) {
  auto [c, q] = exceptional_pair(n);
  PForm num = d(c) * (q * Rational(2)) - d(q) * (c * Rational(3));
  PForm omega(n, 1);
  const Poly x4 = Poly::var(n, 3);
  for (const auto& [s, f] : num.terms()) {
    auto g = f.divide_exact(x4);
    if (!g) throw std::logic_error("exceptional_form: x4 does not divide 2Q dC - 3C dQ");
    omega.add(s, *g);
  }
  return ext_d(omega);
}

/// omega = sum_j w_j (F / f_j) df_j with F = prod f_j.
inline PForm log_primitive(const std::vector<Poly>& fs, const std::vector<Rational>& w) {
  const int n = fs.front().nvars();
  Poly prod = Poly::constant(n, Rational(1));
  for (const auto& f : fs) prod = prod * f;
  PForm omega(n, 1);
  for (size_t j = 0; j < fs.size(); ++j) omega += d(fs[j]) * (*prod.divide_exact(fs[j]) * w[j]);
  return omega;
}

inline bool verify_component(const PForm& eta, Component tag, const ComponentData& data) {
  require_degree(eta, 2, "verify_component");
  const int n = eta.nvars();
  auto need = [&](size_t polys, size_t weights) {
    if (data.polys.size() < polys || data.weights.size() < weights)
      throw std::invalid_argument("verify_component: missing data fields for " + component_name(tag));
    for (const auto& p : data.polys)
      if (p.nvars() != n) throw std::invalid_argument("verify_component: data arity mismatch");
  };
  const auto& p = data.polys;
  const auto& w = data.weights;
  switch (tag) {
    case Component::R22:
    case Component::R13:
      need(2, 0);
      return eta == wedge(d(p[0]), d(p[1]));
    case Component::L1111: {
      need(4, 4);
      if (!(w[0] + w[1] + w[2] + w[3]).is_zero()) return false;
      return eta == ext_d(log_primitive({p.begin(), p.begin() + 4}, {w.begin(), w.begin() + 4}));
    }
    case Component::L112: {
      need(3, 3);
      if (!(w[0] + w[1] + w[2] * Rational(2)).is_zero()) return false;
      return eta == ext_d(log_primitive({p.begin(), p.begin() + 3}, {w.begin(), w.begin() + 3}));
    }
    case Component::E: {
      auto [c, q] = exceptional_pair(n);
      const Poly x4 = Poly::var(n, 3), cq = c * q;
      PForm lhs = eta * (x4 * x4 * cq);
      PForm rhs = wedge(d(cq) * x4 - d(x4) * cq, d(c) * (q * Rational(2)) - d(q) * (c * Rational(3)));
      return lhs == rhs;
    }
    case Component::S2n: {
      need(3, 0);
      if (n < 3) return false;
      for (const auto& f : {p[0], p[1], p[2]})
        for (int v = 3; v < n; ++v)
          if (f.degree_in(v) > 0) return false;
      auto x = [&](int i) { return Poly::var(n, i); };
      if (!(x(0) * p[0] + x(1) * p[1] + x(2) * p[2]).is_zero()) return false;
      return eta == wedge(d(p[0]), d(x(0))) + wedge(d(p[1]), d(x(1))) + wedge(d(p[2]), d(x(2)));
    }
  }
  return false;
}

/// eta~ on the target of phi with pullback(phi, eta~) = eta, coefficients of degree <= dmax.
inline std::optional<PForm> pullback_solve(const PolyMap& phi, const PForm& eta, int dmax) {
  const int m = phi.target();
  const int p = eta.degree();
  if (p > m) return std::nullopt;
  const auto sets = index_sets(m, p);
  Ansatz a(m, {static_cast<int>(sets.size())}, 0, static_cast<unsigned>(dmax));
  FormEquations eq(a, [&](const Ansatz::Column& c, const Poly& mono) {
    return pullback(phi, PForm::term(m, sets[static_cast<size_t>(c.slot)], mono));
  });
  auto x = eq.system(eta).solve();
  if (!x) return std::nullopt;
  auto vals = a.block_values(*x, 0);
  PForm r(m, p);
  for (size_t i = 0; i < sets.size(); ++i) r.add(sets[i], vals[i]);
  if (pullback(phi, r) != eta) throw std::logic_error("pullback_solve: verification failed");
  return r;
}

/// eta only involves z_j and dz_j for j in `kept` (each i_{d/dz_j} eta and
/// each d/dz_j of a coefficient vanishes for j outside).
inline bool depends_only_on(const PForm& eta, IndexSet kept) {
  for (int j = 0; j < eta.nvars(); ++j) {
    if ((kept >> j) & 1U) continue;
    if (!interior(VField::basis(eta.nvars(), j), eta).is_zero()) return false;
    if (eta.uses_var(j)) return false;
  }
  return true;
}

namespace detail {

inline void degree0(const PForm& eta, ClassificationReport& rep) {
  const int n = eta.nvars();
  auto w = mero_decompose(eta);
  const Rational piv = w.pivot.constant_term();
  // Constant 1-forms are differentials of linear functions.
  std::vector<Rational> c1, c2;
  for (int i = 0; i < n; ++i) {
    c1.push_back(w.omega1.num.coeff(index_set({i})).constant_term() / piv);
    c2.push_back(w.omega2.coeff(index_set({i})).constant_term());
  }
  PolyMap phi(n, {Poly::linear(n, c1), Poly::linear(n, c2)});
  rep.branch = "darboux";
  rep.add("phi", phi);
  rep.verified = pullback(phi, PForm::volume(2)) == eta;
}

inline void degree1_nonclosed(const PForm& eta, ClassificationReport& rep) {
  const int n = eta.nvars();
  const PForm de = ext_d(eta);
  std::vector<std::vector<Rational>> gens;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      PForm t = interior(VField::basis(n, b), interior(VField::basis(n, a), de));
      std::vector<Rational> v;
      for (int i = 0; i < n; ++i) v.push_back(t.coeff(index_set({i})).constant_term());
      gens.push_back(v);
    }
  Matrix g(gens.size(), static_cast<size_t>(n));
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < static_cast<size_t>(n); ++j) g(i, j) = gens[i][j];
  Matrix rr = g.rref();
  std::vector<std::vector<Rational>> rows;
  for (size_t i = 0; i < rr.rows() && rows.size() < 3; ++i) {
    std::vector<Rational> v;
    bool nz = false;
    for (size_t j = 0; j < rr.cols(); ++j) {
      v.push_back(rr(i, j));
      nz = nz || !rr(i, j).is_zero();
    }
    if (nz) rows.push_back(v);
  }
  if (rows.size() != 3) throw std::logic_error("classify: d(eta) is not decomposable");
  std::array<PForm, 3> dy{PForm(n, 1), PForm(n, 1), PForm(n, 1)};
  for (size_t k = 0; k < 3; ++k) dy[k] = d(Poly::linear(n, rows[k]));
  auto scale = scalar_ratio(wedge_all(dy), de);
  if (!scale) throw std::logic_error("classify: d(eta) is not spanned by the extracted factors");
  for (auto& v : rows[0]) v /= *scale;
  Matrix t = complete_rows(rows, static_cast<size_t>(n));
  PForm et = to_coordinates(eta, t);
  rep.add("phi", linear_map(n, rows));
  if (!depends_only_on(et, index_set({0, 1, 2}))) {
    rep.branch = "reduction incomplete";
    rep.add("reduced_eta", et);
    return;
  }
  PForm e3 = shrink(et, 3);
  VField l(3);
  l[0] = e3.coeff(index_set({1, 2}));
  l[1] = -e3.coeff(index_set({0, 2}));
  l[2] = e3.coeff(index_set({0, 1}));
  rep.branch = "linear vector field";
  rep.add("L", l);
  rep.add("reduced_eta", contract_volume(l));
  rep.verified = pullback(linear_map(n, rows), contract_volume(l)) == eta && l.divergence() == Poly::constant(3, Rational(1));
}

/// Constant 1-forms theta with theta ^ eta = 0, as linear functions.
inline std::vector<Poly> constant_cofactors(const PForm& eta) {
  std::vector<Poly> out;
  for (const auto& w : containing_foliation_search(eta, 0).basis) {
    std::vector<Rational> c;
    for (int i = 0; i < eta.nvars(); ++i) c.push_back(w.coeff(index_set({i})).constant_term());
    out.push_back(Poly::linear(eta.nvars(), c));
  }
  return out;
}

/// G homogeneous of degree k with eta = dL ^ dG.
inline std::optional<Poly> solve_partner(const PForm& eta, const Poly& l, unsigned k) {
  const int n = eta.nvars();
  const PForm dl = d(l);
  Ansatz a(n, {1}, k, k);
  FormEquations eq(a, [&](const Ansatz::Column&, const Poly& m) { return wedge(dl, d(m)); });
  auto x = eq.system(eta).solve();
  if (!x) return std::nullopt;
  return a.block_values(*x, 0)[0];
}

/// Weights w with omega = sum_j w_j (F / f_j) df_j, F = prod f_j.
inline std::optional<std::vector<Rational>> log_weights(const PForm& omega, const std::vector<Poly>& fs) {
  Poly prod = Poly::constant(omega.nvars(), Rational(1));
  for (const auto& f : fs) prod = prod * f;
  std::vector<PForm> gens;
  for (const auto& f : fs) gens.push_back(d(f) * *prod.divide_exact(f));
  auto w = express_in(omega, gens);
  if (!w) return std::nullopt;
  if (log_primitive(fs, *w) != omega) return std::nullopt;
  return w;
}

inline void degree1_closed(const PForm& eta, ClassificationReport& rep) {
  const int n = eta.nvars();
  PForm omega = dicritical_primitive(eta, 1);
  rep.add("omega", omega);
  auto p = integrating_factor_search(omega, 3);
  if (!p) {
    rep.branch = "unresolved: no cubic integrating factor";
    return;
  }
  rep.add("P", *p);
  for (const auto& l : constant_cofactors(eta)) {
    auto q = solve_partner(eta, l, 2);
    if (!q) continue;
    rep.branch = "L·Q";
    rep.add("L", l);
    rep.add("Q", *q);
    rep.verified = verify_first_integrals(eta, l, *q, Poly::constant(n, Rational(1)));
    return;
  }
  auto fac = linear_factors(*p);
  if (fac.factors.size() == 3 && fac.cofactor.is_constant()) {
    std::vector<Poly> ls;
    for (const auto& [l, m] : fac.factors) ls.push_back(l);
    if (auto w = log_weights(omega, ls)) {
      rep.branch = "x1x2x3 logarithmic";
      for (size_t j = 0; j < 3; ++j) rep.add("L" + std::to_string(j + 1), ls[j]);
      rep.add("lambda", *w);
      rep.verified = ((*w)[0] + (*w)[1] + (*w)[2]).is_zero() && ext_d(log_primitive(ls, *w)) == eta;
      return;
    }
  }
  rep.branch = "unresolved: P found, factorization unrecognized";
}

inline std::optional<ComponentData> try_r22(const PForm& eta) {
  const int n = eta.nvars();
  Ansatz a(n, {1}, 2, 2);
  FormEquations eq(a, [&](const Ansatz::Column&, const Poly& m) { return wedge(d(m), eta); });
  std::vector<Poly> hs;
  for (const auto& v : eq.homogeneous().nullspace()) hs.push_back(a.block_values(v, 0)[0]);
  for (size_t i = 0; i < hs.size(); ++i)
    for (size_t j = i + 1; j < hs.size(); ++j)
      if (auto c = scalar_ratio(eta, wedge(d(hs[i]), d(hs[j])))) return ComponentData{{hs[i] * *c, hs[j]}, {}};
  return std::nullopt;
}

inline std::optional<ComponentData> try_r13(const PForm& eta) {
  for (const auto& l : constant_cofactors(eta))
    if (auto c = solve_partner(eta, l, 3)) return ComponentData{{l, *c}, {}};
  return std::nullopt;
}

inline std::optional<ComponentData> try_l1111(const PForm& omega, const std::optional<Poly>& f) {
  if (!f) return std::nullopt;
  auto fac = linear_factors(*f);
  if (fac.factors.size() != 4 || !fac.cofactor.is_constant()) return std::nullopt;
  std::vector<Poly> ls;
  for (const auto& [l, m] : fac.factors) ls.push_back(l);
  auto w = log_weights(omega, ls);
  if (!w) return std::nullopt;
  return ComponentData{ls, *w};
}

inline std::optional<ComponentData> try_l112(const PForm& omega, const std::optional<Poly>& f) {
  if (!f) return std::nullopt;
  auto fac = linear_factors(*f);
  if (fac.factors.size() != 2 || fac.factors[0].second != 1 || fac.factors[1].second != 1) return std::nullopt;
  if (fac.cofactor.degree() != 2) return std::nullopt;
  std::vector<Poly> fs{fac.factors[0].first, fac.factors[1].first, fac.cofactor};
  auto w = log_weights(omega, fs);
  if (!w) return std::nullopt;
  return ComponentData{fs, *w};
}

struct LinearPullback {
  PolyMap phi;
  std::vector<Poly> pqr;  // in the 3 reduced variables
};

/// Constant kernel of dimension n-3 and reduction to a closed form on C^3.
inline std::optional<LinearPullback> try_s2n(const PForm& eta) {
  const int n = eta.nvars();
  if (n < 3) return std::nullopt;
  // Constant fields v with i_v eta = 0.
  Ansatz a(n, {n}, 0, 0);
  FormEquations eq(a, [&](const Ansatz::Column& c, const Poly& m) {
    VField v(n);
    v[c.slot] = m;
    return interior(v, eta);
  });
  auto ker = eq.homogeneous().nullspace();
  if (static_cast<int>(ker.size()) != n - 3) return std::nullopt;
  // y1..y3 are the linear forms vanishing on the kernel.
  std::vector<std::vector<Rational>> rows;
  if (ker.empty()) {
    rows = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  } else {
    Matrix k(ker.size(), static_cast<size_t>(n));
    for (size_t i = 0; i < ker.size(); ++i)
      for (size_t j = 0; j < static_cast<size_t>(n); ++j) k(i, j) = ker[i][j];
    rows = k.nullspace();
  }
  if (rows.size() != 3) return std::nullopt;
  PForm et = to_coordinates(eta, complete_rows(rows, static_cast<size_t>(n)));
  if (!depends_only_on(et, index_set({0, 1, 2}))) return std::nullopt;
  PForm e3 = shrink(et, 3);
  PForm w3 = interior(radial(3), e3) * Rational(1, 4);
  LinearPullback out{linear_map(n, rows), {}};
  for (int i = 0; i < 3; ++i) out.pqr.push_back(w3.coeff(index_set({i})));
  if (!verify_component(e3, Component::S2n, ComponentData{out.pqr, {}})) return std::nullopt;
  if (pullback(out.phi, e3) != eta) return std::nullopt;
  return out;
}

inline void degree2_closed(const PForm& eta, ClassificationReport& rep) {
  const int n = eta.nvars();
  PForm omega = dicritical_primitive(eta, 2);
  std::optional<Poly> f;
  if (!omega.is_zero()) f = integrating_factor_search(omega, 4);
  std::vector<std::string> found;
  auto record = [&](Component c, const std::optional<ComponentData>& data, const std::vector<std::string>& names,
                    bool check) {
    if (!data) return;
    if (check && !verify_component(eta, c, *data)) throw std::logic_error("classify: component witness fails");
    const std::string tag = component_name(c);
    found.push_back(tag);
    for (size_t i = 0; i < names.size() && i < data->polys.size(); ++i) rep.add(tag + "." + names[i], data->polys[i]);
    if (!data->weights.empty()) rep.add(tag + ".weights", data->weights);
  };
  record(Component::R22, try_r22(eta), {"P", "Q"}, true);
  record(Component::R13, try_r13(eta), {"L", "C"}, true);
  record(Component::L1111, try_l1111(omega, f), {"L1", "L2", "L3", "L4"}, true);
  record(Component::L112, try_l112(omega, f), {"L1", "L2", "Q"}, true);
  if (n >= 4 && verify_component(eta, Component::E, {})) found.push_back(component_name(Component::E));
  if (auto s = try_s2n(eta)) {
    found.push_back(component_name(Component::S2n));
    rep.add("S(2,n).phi", s->phi);
    rep.add("S(2,n).P", s->pqr[0]);
    rep.add("S(2,n).Q", s->pqr[1]);
    rep.add("S(2,n).R", s->pqr[2]);
  }
  rep.add("omega", omega);
  if (f) rep.add("integrating_factor", *f);
  if (found.empty()) {
    rep.branch = "unrecognized";
    return;
  }
  std::string tags;
  for (const auto& t : found) tags += (tags.empty() ? "" : ", ") + t;
  rep.branch = found.front();
  rep.add("components", tags);
  rep.verified = true;
}

/// Jordan type of a rank-2 traceless rotational and the first integrals
/// (u1, u2, u3) whose map pulls back a form on C^3 to eta.
inline void degree2_rank2(const PForm& eta, const Matrix& mx, ClassificationReport& rep) {
  const int n = 4;
  const Matrix xt = mx.transpose();
  auto lin = [&](const std::vector<Rational>& c) { return Poly::linear(n, c); };
  auto unit = [&](int k) {
    std::vector<Rational> e(4, Rational(0));
    e[static_cast<size_t>(k)] = Rational(1);
    return e;
  };
  std::optional<PolyMap> phi;
  if (!mx.pow(4).is_zero()) {
    std::optional<Rational> mu;
    for (const auto& r : uni::rational_roots(mx.charpoly()))
      if (r > Rational(0)) mu = r;
    if (!mu) {
      rep.branch = "unsupported spectrum";
      rep.add("charpoly_roots", uni::rational_roots(mx.charpoly()));
      return;
    }
    auto up = (xt - Matrix::identity(4) * *mu).nullspace();
    auto um = (xt + Matrix::identity(4) * *mu).nullspace();
    auto k0 = xt.nullspace();
    if (up.size() != 1 || um.size() != 1 || k0.size() != 2) {
      rep.branch = "unsupported spectrum";
      return;
    }
    rep.branch = "rank-two semisimple";
    rep.add("mu", *mu);
    phi = PolyMap(n, {lin(up[0]) * lin(um[0]), lin(k0[0]), lin(k0[1])});
  } else if (!mx.pow(2).is_zero()) {
    std::optional<std::vector<Rational>> l3;
    for (int k = 0; k < 4 && !l3; ++k) {
      auto e = unit(k);
      auto x2 = xt.apply(xt.apply(e));
      if (std::any_of(x2.begin(), x2.end(), [](const Rational& r) { return !r.is_zero(); })) l3 = e;
    }
    auto u2 = xt.apply(*l3), u1 = xt.apply(u2);
    std::optional<std::vector<Rational>> u4;
    for (const auto& v : xt.nullspace()) {
      Matrix m(2, 4);
      for (size_t j = 0; j < 4; ++j) {
        m(0, j) = u1[j];
        m(1, j) = v[j];
      }
      if (m.rank() == 2) {
        u4 = v;
        break;
      }
    }
    if (!u4) throw std::logic_error("classify: nilpotent rotational without a second invariant");
    rep.branch = "rank-two nilpotent, cubic";
    phi = PolyMap(n, {lin(u1), lin(*u4), lin(u2) * lin(u2) - lin(u1) * lin(*l3) * Rational(2)});
  } else {
    std::optional<std::pair<std::vector<Rational>, std::vector<Rational>>> pair;
    for (int a = 0; a < 4 && !pair; ++a)
      for (int b = a + 1; b < 4 && !pair; ++b) {
        auto xa = xt.apply(unit(a)), xb = xt.apply(unit(b));
        Matrix m(2, 4);
        for (size_t j = 0; j < 4; ++j) {
          m(0, j) = xa[j];
          m(1, j) = xb[j];
        }
        if (m.rank() == 2) pair = std::make_pair(unit(a), unit(b));
      }
    if (!pair) throw std::logic_error("classify: rank-two rotational with rank-one image");
    auto u1 = xt.apply(pair->first), u2 = xt.apply(pair->second);
    rep.branch = "rank-two nilpotent, square zero";
    phi = PolyMap(n, {lin(u1), lin(u2), lin(u2) * lin(pair->first) - lin(u1) * lin(pair->second)});
  }
  rep.add("phi", *phi);
  auto reduced = pullback_solve(*phi, eta, 2);
  if (!reduced) {
    rep.branch += ": no reduced form";
    return;
  }
  rep.add("reduced_eta", *reduced);
  rep.verified = pullback(*phi, *reduced) == eta;
}

inline void degree2_rank1(const PForm& eta, const Matrix& mx, ClassificationReport& rep) {
  const int n = 4;
  // X = H v: v spans the column space of the rank-one matrix.
  std::vector<Rational> v;
  for (size_t j = 0; j < 4 && v.empty(); ++j)
    for (size_t i = 0; i < 4; ++i)
      if (!mx(i, j).is_zero()) {
        for (size_t k = 0; k < 4; ++k) v.push_back(mx(k, j));
        break;
      }
  // Columns (b1, b2, b3, v) form the inverse coordinate change.
  Matrix b(4, 4);
  {
    std::vector<std::vector<Rational>> cols{v};
    Matrix c = complete_rows(cols, 4);
    for (size_t i = 0; i < 3; ++i)
      for (size_t k = 0; k < 4; ++k) b(k, i) = c(i + 1, k);
    for (size_t k = 0; k < 4; ++k) b(k, 3) = v[k];
  }
  Matrix t = *b.inverse();
  PForm et = to_coordinates(eta, t);
  std::vector<std::vector<Rational>> rows;
  for (size_t i = 0; i < 3; ++i) {
    std::vector<Rational> r;
    for (size_t k = 0; k < 4; ++k) r.push_back(t(i, k));
    rows.push_back(r);
  }
  PolyMap phi = linear_map(n, rows);
  rep.add("phi", phi);
  if (!depends_only_on(et, index_set({0, 1, 2}))) {
    rep.branch = "rank-one rotational: reduction incomplete";
    rep.add("reduced_eta", et);
    return;
  }
  PForm e3 = shrink(et, 3);
  VField z(3);
  z[0] = e3.coeff(index_set({1, 2}));
  z[1] = -e3.coeff(index_set({0, 2}));
  z[2] = e3.coeff(index_set({0, 1}));
  rep.branch = "rank-one rotational";
  rep.add("Z", z);
  rep.add("H", z.divergence());
  rep.add("reduced_eta", contract_volume(z));
  rep.verified = pullback(phi, contract_volume(z)) == eta;
}

inline void degree2_nonclosed(const PForm& eta, ClassificationReport& rep) {
  const int n = eta.nvars();
  if (n != 4) {
    rep.branch = "unsupported: non-closed degree 2 needs 4 variables";
    return;
  }
  const VField x = rotational4(eta);
  rep.add("X", x);
  const Matrix mx = *x.linear_matrix();
  if (interior(radial(n), eta).is_zero()) {
    rep.branch = "dicritical";
    rep.verified = interior(radial(n), contract_volume(x)) * Rational(1, 4) == eta;
    return;
  }
  const size_t rank = mx.rank();
  if (rank >= 3) {
    auto r = rank3_rotational_analyze(eta);
    rep.branch = branch_name(r.branch);
    rep.add("Y", r.y);
    rep.add("lambda", r.lambda);
    rep.add("trace_Y", r.trace_y);
    bool ok = interior(r.y, contract_volume(x)) == eta;
    if (r.branch == RotationalAnalysis::Branch::Nilpotent) {
      rep.add("rho", r.rho);
      rep.add("spectrum", r.spectrum);
      std::vector<std::vector<Rational>> rows;
      for (size_t i = 0; i < 4; ++i) {
        std::vector<Rational> row;
        for (size_t j = 0; j < 4; ++j) row.push_back(r.coordinates(i, j));
        rows.push_back(row);
      }
      rep.add("coordinates", linear_map(n, rows));
      auto fx = case_b_normal_data(r.rho, r.lambda);
      rep.add("A", fx.a);
      rep.add("B", fx.b);
      rep.add("C", fx.c);
      PForm et = to_coordinates(eta, r.coordinates);
      auto scale = scalar_ratio(et, fx.eta);
      ok = ok && scale.has_value();
      if (scale) rep.add("normal_form_scale", *scale);
    }
    rep.verified = ok;
    return;
  }
  if (rank == 1) {
    degree2_rank1(eta, mx, rep);
    return;
  }
  degree2_rank2(eta, mx, rep);
}

}  // namespace detail

/// Normal-form classification of a homogeneous integrable 2-form of degree <= 2.
inline ClassificationReport classify(const PForm& eta) {
  require_degree(eta, 2, "classify");
  if (eta.is_zero()) throw std::invalid_argument("classify: zero form");
  Homogeneity h = eta.homogeneity();
  if (!h.homogeneous()) throw std::domain_error("not homogeneous");
  if (h.degree > 2) throw std::domain_error("degree > 2");
  if (!is_integrable2(eta)) throw std::domain_error("not integrable");
  ClassificationReport rep;
  rep.degree = static_cast<int>(h.degree);
  const bool closed = ext_d(eta).is_zero();
  if (rep.degree == 0) {
    detail::degree0(eta, rep);
  } else if (rep.degree == 1) {
    closed ? detail::degree1_closed(eta, rep) : detail::degree1_nonclosed(eta, rep);
  } else {
    closed ? detail::degree2_closed(eta, rep) : detail::degree2_nonclosed(eta, rep);
  }
  return rep;
}

}  // namespace foliate
