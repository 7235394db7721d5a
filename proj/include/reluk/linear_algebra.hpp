#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "reluk/error.hpp"
#include "reluk/rational.hpp"

namespace reluk {

using ExactVector = std::vector<Rational>;

/// Dense row-major matrix of rationals.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  ExactMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ShapeError("ragged matrix literal");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  ExactVector operator*(const ExactVector& v) const {
    if (v.size() != cols_) throw ShapeError("matrix-vector shape mismatch");
    ExactVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (!(*this)(r, c).is_zero()) out[r] += (*this)(r, c) * v[c];
    return out;
  }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols_ != b.rows_) throw ShapeError("matrix-matrix shape mismatch");
    ExactMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

  Rational max_abs() const {
    Rational m;
    for (const auto& v : a_)
      if (v.abs() > m) m = v.abs();
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> a_;
};

/// PLU factorization over the rationals. The pivot in each column is the
/// entry of largest absolute value (first one on ties), so the result is
/// deterministic and never reports a spurious singularity.
class ExactLU {
 public:
  explicit ExactLU(ExactMatrix m) : lu_(std::move(m)) {
    if (lu_.rows() != lu_.cols()) throw ShapeError("LU requires a square matrix");
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      Rational best = lu_(col, col).abs();
      for (std::size_t r = col + 1; r < n; ++r) {
        Rational a = lu_(r, col).abs();
        if (a > best) {
          best = std::move(a);
          piv = r;
        }
      }
      if (best.is_zero()) throw SingularSystem();
      if (piv != col) {
        for (std::size_t c = 0; c < n; ++c) std::swap(lu_(piv, c), lu_(col, c));
        std::swap(perm_[piv], perm_[col]);
      }
      for (std::size_t r = col + 1; r < n; ++r) {
        if (lu_(r, col).is_zero()) continue;
        Rational f = lu_(r, col) / lu_(col, col);
        for (std::size_t c = col + 1; c < n; ++c)
          if (!lu_(col, c).is_zero()) lu_(r, c) -= f * lu_(col, c);
        lu_(r, col) = std::move(f);
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  ExactVector solve(const ExactVector& v) const {
    const std::size_t n = size();
    if (v.size() != n) throw ShapeError("right-hand side length mismatch");
    ExactVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = v[perm_[i]];
      for (std::size_t j = 0; j < i; ++j)
        if (!lu_(i, j).is_zero() && !y[j].is_zero()) y[i] -= lu_(i, j) * y[j];
    }
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j)
        if (!lu_(i, j).is_zero() && !y[j].is_zero()) y[i] -= lu_(i, j) * y[j];
      y[i] /= lu_(i, i);
    }
    return y;
  }

 private:
  ExactMatrix lu_;
  std::vector<std::size_t> perm_;
};

/// Exact solution of M x = v; throws SingularSystem when M is singular.
inline ExactVector solve_linear_exact(const ExactMatrix& m, const ExactVector& v) {
  if (m.rows() != m.cols()) throw ShapeError("system matrix must be square");
  if (v.size() != m.rows()) throw ShapeError("right-hand side length mismatch");
  return ExactLU(m).solve(v);
}

}  // namespace reluk
