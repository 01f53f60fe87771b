#pragma once

#include "foliate/linalg.hpp"
#include "foliate/poly.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace foliate {

/// Strictly increasing index tuple, stored as a bitmask (bit i = dx_{i+1}).
using IndexSet = uint8_t;

inline int popcount(IndexSet s) { return std::popcount(static_cast<unsigned>(s)); }

inline std::vector<int> indices(IndexSet s) {
  std::vector<int> out;
  for (int i = 0; i < kMaxVars; ++i)
    if ((s >> i) & 1U) out.push_back(i);
  return out;
}

inline IndexSet index_set(std::initializer_list<int> idx) {
  IndexSet s = 0;
  for (int i : idx) s = static_cast<IndexSet>(s | (1U << i));
  return s;
}

/// Lexicographic order on the sorted tuples.
struct IndexLess {
  bool operator()(IndexSet a, IndexSet b) const {
    while (a != 0 && b != 0) {
      int ia = std::countr_zero(static_cast<unsigned>(a));
      int ib = std::countr_zero(static_cast<unsigned>(b));
      if (ia != ib) return ia < ib;
      a = static_cast<IndexSet>(a & (a - 1));
      b = static_cast<IndexSet>(b & (b - 1));
    }
    return a == 0 && b != 0;
  }
};

/// All index sets of size p in n variables, lexicographic.
inline std::vector<IndexSet> index_sets(int n, int p) {
  std::vector<IndexSet> out;
  for (unsigned s = 0; s < (1U << n); ++s)
    if (std::popcount(s) == p) out.push_back(static_cast<IndexSet>(s));
  std::sort(out.begin(), out.end(), IndexLess{});
  return out;
}

/// (-1)^{number of pairs (i in a, j in b) with i > j}.
inline int merge_sign(IndexSet a, IndexSet b) {
  int inv = 0;
  for (int j = 0; j < kMaxVars; ++j)
    if ((b >> j) & 1U) inv += std::popcount(static_cast<unsigned>(a) >> (j + 1));
  return (inv & 1) ? -1 : 1;
}

class PForm {
public:
  using TermMap = std::map<IndexSet, Poly, IndexLess>;

  PForm() : PForm(1, 0) {}
  PForm(int nvars, int degree) : n_(nvars), p_(degree) {
    check_arity(nvars);
    if (degree < 0 || degree > nvars) throw std::invalid_argument("form degree out of range");
  }

  /// Degree-0 form.
  explicit PForm(const Poly& f) : PForm(f.nvars(), 0) { add(0, f); }

  static PForm dx(int nvars, int i) {
    PForm w(nvars, 1);
    w.add(index_set({i}), Poly::constant(nvars, Rational(1)));
    return w;
  }

  static PForm term(int nvars, IndexSet s, const Poly& f) {
    PForm w(nvars, popcount(s));
    w.add(s, f);
    return w;
  }

  /// 1-form sum_i c[i] dx_{i+1}.
  static PForm one_form(std::span<const Poly> c) {
    if (c.empty()) throw std::invalid_argument("one_form: no coefficients");
    const int n = static_cast<int>(c.size());
    PForm w(n, 1);
    for (int i = 0; i < n; ++i) w.add(index_set({i}), c[static_cast<size_t>(i)]);
    return w;
  }

  static PForm volume(int nvars) {
    return term(nvars, static_cast<IndexSet>((1U << nvars) - 1), Poly::constant(nvars, Rational(1)));
  }

  int nvars() const { return n_; }
  int degree() const { return p_; }
  const TermMap& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  Poly coeff(IndexSet s) const {
    auto it = t_.find(s);
    return it == t_.end() ? Poly(n_) : it->second;
  }
  Poly coeff(std::initializer_list<int> idx) const { return coeff(index_set(idx)); }

  /// Coefficients in lexicographic index order, zeros included.
  std::vector<Poly> coefficients() const {
    std::vector<Poly> out;
    for (auto s : index_sets(n_, p_)) out.push_back(coeff(s));
    return out;
  }

  /// Degree-0 form as a polynomial.
  Poly as_poly() const {
    if (p_ != 0) throw std::invalid_argument("as_poly on a form of positive degree");
    return coeff(0);
  }

  void add(IndexSet s, const Poly& f) {
    if (popcount(s) != p_) throw std::invalid_argument("index set size does not match form degree");
    if (s >> n_ != 0) throw std::out_of_range("index set exceeds variable count");
    if (f.nvars() != n_) throw std::invalid_argument("coefficient variable count mismatch");
    if (f.is_zero()) return;
    auto [it, inserted] = t_.try_emplace(s, f);
    if (!inserted) {
      it->second += f;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  PForm operator-() const {
    PForm r = *this;
    for (auto& [s, f] : r.t_) f = -f;
    return r;
  }
  PForm& operator+=(const PForm& o) {
    same_shape(o);
    for (const auto& [s, f] : o.t_) add(s, f);
    return *this;
  }
  PForm& operator-=(const PForm& o) {
    same_shape(o);
    for (const auto& [s, f] : o.t_) add(s, -f);
    return *this;
  }
  PForm& operator*=(const Poly& g) {
    if (g.nvars() != n_) throw std::invalid_argument("variable count mismatch");
    if (g.is_zero()) {
      t_.clear();
      return *this;
    }
    for (auto& [s, f] : t_) f *= g;
    return *this;
  }
  PForm& operator*=(const Rational& c) {
    if (c.is_zero()) {
      t_.clear();
      return *this;
    }
    for (auto& [s, f] : t_) f *= c;
    return *this;
  }

  friend PForm operator+(PForm a, const PForm& b) { return a += b; }
  friend PForm operator-(PForm a, const PForm& b) { return a -= b; }
  friend PForm operator*(PForm a, const Poly& g) { return a *= g; }
  friend PForm operator*(const Poly& g, PForm a) { return a *= g; }
  friend PForm operator*(PForm a, const Rational& c) { return a *= c; }
  friend PForm operator*(const Rational& c, PForm a) { return a *= c; }

  friend bool operator==(const PForm& a, const PForm& b) {
    return a.n_ == b.n_ && a.p_ == b.p_ && a.t_ == b.t_;
  }

  /// Common homogeneity of all coefficients.
  Homogeneity homogeneity() const {
    Homogeneity h{HomKind::Zero, 0};
    for (const auto& [s, f] : t_) {
      Homogeneity hf = f.homogeneity();
      if (!hf.homogeneous()) return {HomKind::Mixed, 0};
      if (h.kind == HomKind::Zero) {
        h = hf;
      } else if (hf.degree != h.degree) {
        return {HomKind::Mixed, 0};
      }
    }
    return h;
  }

  /// Maximum coefficient degree, -1 for the zero form.
  int coeff_degree() const {
    int d = -1;
    for (const auto& [s, f] : t_) d = std::max(d, f.degree());
    return d;
  }

  bool uses_var(int v) const {
    for (const auto& [s, f] : t_)
      if (f.uses_var(v)) return true;
    return false;
  }

  PForm substitute(std::span<const Poly> images) const {
    PForm r(images.front().nvars(), p_);
    for (const auto& [s, f] : t_) r.add(s, f.substitute(images));
    return r;
  }

  std::vector<Rational> evaluate(std::span<const Rational> point) const {
    std::vector<Rational> out;
    for (auto s : index_sets(n_, p_)) out.push_back(coeff(s).evaluate(point));
    return out;
  }

  /// Grammar text, e.g. "x3**2*dx2^dx3 + (x1*x2 - x3)*dx1^dx4".
  std::string str(char var_prefix = 'x') const {
    if (t_.empty()) return "0";
    if (p_ == 0) return t_.begin()->second.str(var_prefix);
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, f] : t_) {
      std::string diff;
      for (int i : indices(s)) {
        if (!diff.empty()) diff += '^';
        diff += std::string("d") + var_prefix + std::to_string(i + 1);
      }
      if (f.size() == 1) {
        const auto& [m, c] = *f.terms().begin();
        Poly::write_term(os, m, c, first, var_prefix, diff);
      } else {
        if (!first) os << " + ";
        os << '(' << f.str(var_prefix) << ")*" << diff;
      }
      first = false;
    }
    return os.str();
  }

  void same_shape(const PForm& o) const {
    if (o.n_ != n_) throw std::invalid_argument("form variable count mismatch");
    if (o.p_ != p_) throw std::invalid_argument("form degree mismatch");
  }

private:
  int n_;
  int p_;
  TermMap t_;
};

inline std::ostream& operator<<(std::ostream& os, const PForm& w) { return os << w.str(); }

inline PForm wedge(const PForm& a, const PForm& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("wedge: variable count mismatch");
  const int n = a.nvars();
  const int p = a.degree() + b.degree();
  if (p > n) return PForm(n, n);
  PForm r(n, p);
  for (const auto& [sa, fa] : a.terms())
    for (const auto& [sb, fb] : b.terms()) {
      if ((sa & sb) != 0) continue;
      Poly c = fa * fb;
      if (merge_sign(sa, sb) < 0) c = -c;
      r.add(static_cast<IndexSet>(sa | sb), c);
    }
  return r;
}

/// Wedge of a list, left to right.
inline PForm wedge_all(std::span<const PForm> fs) {
  if (fs.empty()) throw std::invalid_argument("wedge_all: empty list");
  PForm r = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) r = wedge(r, fs[i]);
  return r;
}

inline PForm ext_d(const PForm& a) {
  const int n = a.nvars();
  if (a.degree() == n) return PForm(n, n);
  PForm r(n, a.degree() + 1);
  for (const auto& [s, f] : a.terms())
    for (int k = 0; k < n; ++k) {
      if ((s >> k) & 1U) continue;
      Poly df = f.partial(k);
      if (df.is_zero()) continue;
      int below = std::popcount(static_cast<unsigned>(s) & ((1U << k) - 1));
      if (below & 1) df = -df;
      r.add(static_cast<IndexSet>(s | (1U << k)), df);
    }
  return r;
}

inline PForm d(const Poly& f) { return ext_d(PForm(f)); }

class VField {
public:
  VField() : VField(1) {}
  explicit VField(int nvars) : n_(nvars) {
    check_arity(nvars);
    c_.assign(static_cast<size_t>(nvars), Poly(nvars));
  }
  explicit VField(std::vector<Poly> comps) : c_(std::move(comps)) {
    if (c_.empty()) throw std::invalid_argument("vector field with no components");
    n_ = static_cast<int>(c_.size());
    check_arity(n_);
    for (const auto& p : c_)
      if (p.nvars() != n_) throw std::invalid_argument("vector field component arity mismatch");
  }

  /// Constant field with components v.
  static VField constant(std::span<const Rational> v) {
    const int n = static_cast<int>(v.size());
    VField x(n);
    for (int i = 0; i < n; ++i) x.c_[static_cast<size_t>(i)] = Poly::constant(n, v[static_cast<size_t>(i)]);
    return x;
  }

  static VField basis(int n, int i) {
    VField x(n);
    x.c_[static_cast<size_t>(i)] = Poly::constant(n, Rational(1));
    return x;
  }

  /// Linear field x -> M x, i.e. component i is sum_j M(i,j) x_j.
  static VField linear(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    VField x(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!m(i, j).is_zero())
          x.c_[static_cast<size_t>(i)] += Poly::var(n, j) * m(i, j);
    return x;
  }

  int nvars() const { return n_; }
  const std::vector<Poly>& components() const { return c_; }
  const Poly& operator[](int i) const { return c_[static_cast<size_t>(i)]; }
  Poly& operator[](int i) { return c_[static_cast<size_t>(i)]; }

  bool is_zero() const {
    for (const auto& p : c_)
      if (!p.is_zero()) return false;
    return true;
  }

  /// Derivation X(f) = sum_i X_i df/dx_i.
  Poly apply(const Poly& f) const {
    Poly r(n_);
    for (int i = 0; i < n_; ++i)
      if (!c_[static_cast<size_t>(i)].is_zero()) r += c_[static_cast<size_t>(i)] * f.partial(i);
    return r;
  }

  Poly divergence() const {
    Poly r(n_);
    for (int i = 0; i < n_; ++i) r += c_[static_cast<size_t>(i)].partial(i);
    return r;
  }

  /// Matrix of a field whose components are linear forms.
  std::optional<Matrix> linear_matrix() const {
    Matrix m(static_cast<size_t>(n_), static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i)
      for (const auto& [mono, c] : c_[static_cast<size_t>(i)].terms()) {
        if (mono.degree() != 1) return std::nullopt;
        int j = 0;
        while (mono[j] == 0) ++j;
        m(static_cast<size_t>(i), static_cast<size_t>(j)) = c;
      }
    return m;
  }

  std::vector<Rational> evaluate(std::span<const Rational> point) const {
    std::vector<Rational> out;
    for (const auto& p : c_) out.push_back(p.evaluate(point));
    return out;
  }

  VField& operator+=(const VField& o) {
    same_arity(o);
    for (int i = 0; i < n_; ++i) c_[static_cast<size_t>(i)] += o.c_[static_cast<size_t>(i)];
    return *this;
  }
  VField& operator-=(const VField& o) {
    same_arity(o);
    for (int i = 0; i < n_; ++i) c_[static_cast<size_t>(i)] -= o.c_[static_cast<size_t>(i)];
    return *this;
  }
  VField& operator*=(const Rational& s) {
    for (auto& p : c_) p *= s;
    return *this;
  }
  VField& operator*=(const Poly& g) {
    for (auto& p : c_) p *= g;
    return *this;
  }
  friend VField operator+(VField a, const VField& b) { return a += b; }
  friend VField operator-(VField a, const VField& b) { return a -= b; }
  friend VField operator*(VField a, const Rational& s) { return a *= s; }
  friend VField operator*(const Rational& s, VField a) { return a *= s; }
  friend VField operator*(const Poly& g, VField a) { return a *= g; }
  friend bool operator==(const VField& a, const VField& b) { return a.c_ == b.c_; }

  std::string str(char var_prefix = 'x') const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i].str(var_prefix);
    os << ']';
    return os.str();
  }

  void same_arity(const VField& o) const {
    if (o.n_ != n_) throw std::invalid_argument("vector field variable count mismatch");
  }

private:
  int n_;
  std::vector<Poly> c_;
};

inline VField radial(int n) {
  check_arity(n);
  return VField(coordinates(n));
}

/// Lie bracket [X, Y] with components X(Y_i) - Y(X_i).
inline VField bracket(const VField& x, const VField& y) {
  x.same_arity(y);
  VField r(x.nvars());
  for (int i = 0; i < x.nvars(); ++i) r[i] = x.apply(y[i]) - y.apply(x[i]);
  return r;
}

/// Contraction in the first slot: i_v(dx_I) = sum_t (-1)^t v_{i_t} dx_{I minus i_t}.
inline PForm interior(const VField& v, const PForm& a) {
  if (v.nvars() != a.nvars()) throw std::invalid_argument("interior: variable count mismatch");
  const int n = a.nvars();
  if (a.degree() == 0) return PForm(n, 0);
  PForm r(n, a.degree() - 1);
  for (const auto& [s, f] : a.terms()) {
    int t = 0;
    for (int i : indices(s)) {
      const Poly& vi = v[i];
      if (!vi.is_zero()) {
        Poly c = vi * f;
        if (t & 1) c = -c;
        r.add(static_cast<IndexSet>(s & ~(1U << i)), c);
      }
      ++t;
    }
  }
  return r;
}

/// Lie derivative by Cartan's formula.
inline PForm lie(const VField& v, const PForm& a) {
  if (v.nvars() != a.nvars()) throw std::invalid_argument("lie: variable count mismatch");
  if (a.degree() == a.nvars()) return ext_d(interior(v, a));
  PForm r = interior(v, ext_d(a));
  if (a.degree() > 0) r += ext_d(interior(v, a));
  return r;
}

/// Polynomial map from C^source to C^target.
class PolyMap {
public:
  PolyMap(int source, std::vector<Poly> comps) : src_(source), c_(std::move(comps)) {
    check_arity(source);
    check_arity(static_cast<int>(c_.size()));
    for (const auto& p : c_)
      if (p.nvars() != source) throw std::invalid_argument("map component arity mismatch");
  }

  static PolyMap identity(int n) { return PolyMap(n, coordinates(n)); }

  /// Linear map x -> M x.
  static PolyMap linear(const Matrix& m) {
    const int src = static_cast<int>(m.cols());
    std::vector<Poly> comps;
    for (size_t i = 0; i < m.rows(); ++i) {
      Poly p(src);
      for (size_t j = 0; j < m.cols(); ++j)
        if (!m(i, j).is_zero()) p += Poly::var(src, static_cast<int>(j)) * m(i, j);
      comps.push_back(std::move(p));
    }
    return PolyMap(src, std::move(comps));
  }

  int source() const { return src_; }
  int target() const { return static_cast<int>(c_.size()); }
  const std::vector<Poly>& components() const { return c_; }
  const Poly& operator[](int i) const { return c_[static_cast<size_t>(i)]; }

  Poly pull(const Poly& f) const {
    if (f.nvars() != target()) throw std::invalid_argument("pullback: arity mismatch");
    return f.substitute(c_);
  }

  std::string str(char var_prefix = 'x') const {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i].str(var_prefix);
    os << ')';
    return os.str();
  }

private:
  int src_;
  std::vector<Poly> c_;
};

inline PForm pullback(const PolyMap& m, const PForm& a) {
  if (a.nvars() != m.target()) throw std::invalid_argument("pullback: arity mismatch");
  const int n = m.source();
  std::vector<std::optional<PForm>> dm(static_cast<size_t>(m.target()));
  auto diff = [&](int i) -> const PForm& {
    auto& slot = dm[static_cast<size_t>(i)];
    if (!slot) slot = d(m[i]);
    return *slot;
  };
  PForm r(n, std::min(a.degree(), n));
  if (a.degree() > n) return r;
  for (const auto& [s, f] : a.terms()) {
    PForm t(m.pull(f));
    for (int i : indices(s)) t = wedge(t, diff(i));
    r += t;
  }
  return r;
}

/// Restriction to the coordinate subspace spanned by `kept` (bitmask),
/// keeping the ambient variable count.
inline PForm restrict_to(const PForm& a, IndexSet kept) {
  if (kept == 0) throw std::invalid_argument("restrict: empty variable subset");
  const int n = a.nvars();
  std::vector<Poly> images;
  for (int i = 0; i < n; ++i) images.push_back(((kept >> i) & 1U) ? Poly::var(n, i) : Poly(n));
  PForm r(n, a.degree());
  for (const auto& [s, f] : a.terms()) {
    if ((s & ~kept) != 0) continue;
    r.add(s, f.substitute(images));
  }
  return r;
}

/// The same form viewed in more variables.
inline PForm extend(const PForm& a, int n) {
  if (n < a.nvars()) throw std::invalid_argument("extend: target arity smaller than source");
  std::vector<Poly> images;
  for (int i = 0; i < a.nvars(); ++i) images.push_back(Poly::var(n, i));
  PForm r(n, a.degree());
  for (const auto& [s, f] : a.terms()) r.add(s, f.substitute(images));
  return r;
}

inline Poly extend(const Poly& f, int n) {
  std::vector<Poly> images;
  for (int i = 0; i < f.nvars(); ++i) images.push_back(Poly::var(n, i));
  return f.substitute(images);
}

}  // namespace foliate
