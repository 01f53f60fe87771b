#pragma once

#include "foliate/rational.hpp"
#include "foliate/univariate.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace foliate {

/// Small dense matrix over Q.
class Matrix {
public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : r_(rows), c_(cols), a_(rows * cols, Rational(0)) {}

  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  Rational& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  const Rational& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (size_t i = 0; i < r_; ++i)
      for (size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix m(a.r_, b.c_);
    for (size_t i = 0; i < a.r_; ++i)
      for (size_t k = 0; k < a.c_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (size_t j = 0; j < b.c_; ++j) m(i, j) += a(i, k) * b(k, j);
      }
    return m;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
    return a;
  }
  friend Matrix operator*(Matrix a, const Rational& s) {
    for (auto& x : a.a_) x *= s;
    return a;
  }

  std::vector<Rational> apply(const std::vector<Rational>& v) const {
    std::vector<Rational> out(r_, Rational(0));
    for (size_t i = 0; i < r_; ++i)
      for (size_t j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  Rational trace() const {
    Rational t(0);
    for (size_t i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
    return t;
  }

  Matrix pow(unsigned k) const {
    Matrix r = identity(r_);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Reduced row echelon form; `pivots` receives pivot columns in order.
  Matrix rref(std::vector<size_t>* pivots = nullptr) const {
    Matrix m = *this;
    size_t row = 0;
    std::vector<size_t> piv;
    for (size_t col = 0; col < c_ && row < r_; ++col) {
      size_t p = row;
      while (p < r_ && m(p, col).is_zero()) ++p;
      if (p == r_) continue;
      if (p != row)
        for (size_t j = 0; j < c_; ++j) std::swap(m(p, j), m(row, j));
      Rational inv = m(row, col).inverse();
      for (size_t j = col; j < c_; ++j) m(row, j) *= inv;
      for (size_t i = 0; i < r_; ++i) {
        if (i == row || m(i, col).is_zero()) continue;
        Rational f = m(i, col);
        for (size_t j = col; j < c_; ++j) m(i, j) -= f * m(row, j);
      }
      piv.push_back(col);
      ++row;
    }
    if (pivots) *pivots = std::move(piv);
    return m;
  }

  size_t rank() const {
    std::vector<size_t> piv;
    rref(&piv);
    return piv.size();
  }

  /// Basis of {v : M v = 0}, one vector per free column in ascending order.
  std::vector<std::vector<Rational>> nullspace() const {
    std::vector<size_t> piv;
    Matrix m = rref(&piv);
    std::vector<bool> is_piv(c_, false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (size_t f = 0; f < c_; ++f) {
      if (is_piv[f]) continue;
      std::vector<Rational> v(c_, Rational(0));
      v[f] = Rational(1);
      for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
      basis.push_back(std::move(v));
    }
    return basis;
  }

  std::optional<Matrix> inverse() const {
    if (r_ != c_) throw std::invalid_argument("inverse of non-square matrix");
    Matrix aug(r_, 2 * r_);
    for (size_t i = 0; i < r_; ++i) {
      for (size_t j = 0; j < r_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, r_ + i) = Rational(1);
    }
    std::vector<size_t> piv;
    Matrix red = aug.rref(&piv);
    if (piv.size() < r_ || piv[r_ - 1] != r_ - 1) return std::nullopt;
    Matrix inv(r_, r_);
    for (size_t i = 0; i < r_; ++i)
      for (size_t j = 0; j < r_; ++j) inv(i, j) = red(i, r_ + j);
    return inv;
  }

  Rational determinant() const {
    if (r_ != c_) throw std::invalid_argument("determinant of non-square matrix");
    Matrix m = *this;
    Rational det(1);
    for (size_t col = 0; col < r_; ++col) {
      size_t p = col;
      while (p < r_ && m(p, col).is_zero()) ++p;
      if (p == r_) return Rational(0);
      if (p != col) {
        for (size_t j = 0; j < r_; ++j) std::swap(m(p, j), m(col, j));
        det = -det;
      }
      det *= m(col, col);
      for (size_t i = col + 1; i < r_; ++i) {
        if (m(i, col).is_zero()) continue;
        Rational f = m(i, col) / m(col, col);
        for (size_t j = col; j < r_; ++j) m(i, j) -= f * m(col, j);
      }
    }
    return det;
  }

  /// Characteristic polynomial det(tI - M) by Faddeev-LeVerrier.
  uni::UPoly charpoly() const {
    if (r_ != c_) throw std::invalid_argument("charpoly of non-square matrix");
    const size_t n = r_;
    uni::UPoly c(n + 1, Rational(0));
    c[n] = Rational(1);
    Matrix mk(n, n);  // M_0 = 0
    for (size_t k = 1; k <= n; ++k) {
      Matrix next = *this * mk;
      for (size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
      mk = next;
      Rational tr = (*this * mk).trace();
      c[n - k] = -tr / Rational(static_cast<long>(k));
    }
    return c;
  }

private:
  size_t r_ = 0;
  size_t c_ = 0;
  std::vector<Rational> a_;
};

/// Sparse linear system over Q solved by incremental echelon reduction.
/// Pivot columns are the columns that are not combinations of earlier ones,
/// so results do not depend on the order rows are added.
class SparseSystem {
public:
  using Row = std::map<size_t, Rational>;

  explicit SparseSystem(size_t cols) : cols_(cols) {}

  size_t cols() const { return cols_; }
  size_t rank() const { return pivots_.size(); }
  bool consistent() const { return consistent_; }

  void add_row(Row row, Rational rhs = Rational(0)) {
    auto it = row.begin();
    while (it != row.end()) {
      auto p = pivots_.find(it->first);
      if (p == pivots_.end()) {
        ++it;
        continue;
      }
      const size_t col = it->first;
      const Rational f = it->second;
      for (const auto& [c, v] : p->second.coeffs) {
        auto [slot, inserted] = row.try_emplace(c, -(f * v));
        if (!inserted) {
          slot->second -= f * v;
          if (slot->second.is_zero()) row.erase(slot);
        }
      }
      rhs -= f * p->second.rhs;
      it = row.upper_bound(col);
    }
    if (row.empty()) {
      if (!rhs.is_zero()) consistent_ = false;
      return;
    }
    const size_t lead = row.begin()->first;
    const Rational inv = row.begin()->second.inverse();
    for (auto& [c, v] : row) v *= inv;
    rhs *= inv;
    pivots_.emplace(lead, Pivot{std::move(row), std::move(rhs)});
  }

  /// Solution with all free variables zero, or nullopt if inconsistent.
  std::optional<std::vector<Rational>> solve() const {
    if (!consistent_) return std::nullopt;
    return back_substitute(std::vector<Rational>(cols_, Rational(0)), true);
  }

  /// Basis of the solution space of the homogeneous system.
  std::vector<std::vector<Rational>> nullspace() const {
    std::vector<std::vector<Rational>> basis;
    for (size_t f = 0; f < cols_; ++f) {
      if (pivots_.count(f) != 0) continue;
      std::vector<Rational> x(cols_, Rational(0));
      x[f] = Rational(1);
      basis.push_back(back_substitute(std::move(x), false));
    }
    return basis;
  }

private:
  struct Pivot {
    Row coeffs;
    Rational rhs;
  };

  std::vector<Rational> back_substitute(std::vector<Rational> x, bool with_rhs) const {
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      Rational v = with_rhs ? it->second.rhs : Rational(0);
      for (const auto& [c, a] : it->second.coeffs) {
        if (c == it->first) continue;
        if (!x[c].is_zero()) v -= a * x[c];
      }
      x[it->first] = v;
    }
    return x;
  }

  size_t cols_;
  std::map<size_t, Pivot> pivots_;
  bool consistent_ = true;
};

}  // namespace foliate
