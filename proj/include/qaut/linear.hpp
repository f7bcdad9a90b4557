#pragma once

// Exact linear algebra over Scalar.

#include "qaut/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qaut {

// Row-major dense matrix.
class ScalarMatrix {
 public:
  ScalarMatrix() = default;
  ScalarMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ScalarMatrix identity(std::size_t n) {
    ScalarMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
    ScalarMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
        }
      }
    }
    return r;
  }

  friend ScalarMatrix operator+(const ScalarMatrix& a, const ScalarMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
    ScalarMatrix r(a);
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }

  friend ScalarMatrix operator-(const ScalarMatrix& a, const ScalarMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
    ScalarMatrix r(a);
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
  }

  ScalarMatrix scaled(const Scalar& s) const {
    ScalarMatrix r(*this);
    for (auto& x : r.data_) x = x * s;
    return r;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
  }

  friend bool operator==(const ScalarMatrix&, const ScalarMatrix&) = default;

  // Kronecker product.
  friend ScalarMatrix kron(const ScalarMatrix& a, const ScalarMatrix& b) {
    ScalarMatrix r(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) {
        if (a(i, j).is_zero()) continue;
        for (std::size_t k = 0; k < b.rows_; ++k)
          for (std::size_t l = 0; l < b.cols_; ++l) {
            if (!b(k, l).is_zero()) r(i * b.rows_ + k, j * b.cols_ + l) = a(i, j) * b(k, l);
          }
      }
    return r;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

// One solution of matrix * x = rhs, or nullopt when inconsistent. Pivot rows are chosen
// by fewest nonzeros, ties by lowest index; free variables are set to zero.
inline std::optional<std::vector<Scalar>> solve_linear(const ScalarMatrix& matrix, const std::vector<Scalar>& rhs) {
  const std::size_t m = matrix.rows(), n = matrix.cols();
  if (rhs.size() != m) throw std::invalid_argument("right-hand side length does not match matrix rows");
  ScalarMatrix a(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = matrix(i, j);
    a(i, n) = rhs[i];
  }
  auto row_weight = [&](std::size_t r) {
    std::size_t w = 0;
    for (std::size_t j = 0; j <= n; ++j) w += a(r, j).is_zero() ? 0 : 1;
    return w;
  };
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::optional<std::size_t> best;
    std::size_t best_weight = 0;
    for (std::size_t r = row; r < m; ++r) {
      if (a(r, col).is_zero()) continue;
      std::size_t w = row_weight(r);
      if (!best || w < best_weight) {
        best = r;
        best_weight = w;
      }
    }
    if (!best) continue;
    if (*best != row)
      for (std::size_t j = 0; j <= n; ++j) std::swap(a(row, j), a(*best, j));
    const Scalar inv = a(row, col).inverse();
    for (std::size_t j = col; j <= n; ++j) a(row, j) = a(row, j) * inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || a(r, col).is_zero()) continue;
      const Scalar f = a(r, col);
      for (std::size_t j = col; j <= n; ++j) {
        if (!a(row, j).is_zero()) a(r, j) -= f * a(row, j);
      }
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < m; ++r) {
    if (!a(r, n).is_zero()) return std::nullopt;
  }
  std::vector<Scalar> x(n);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = a(r, n);
  for (std::size_t i = 0; i < m; ++i) {
    Scalar acc;
    for (std::size_t j = 0; j < n; ++j) {
      if (!matrix(i, j).is_zero() && !x[j].is_zero()) acc += matrix(i, j) * x[j];
    }
    if (!(acc == rhs[i])) throw std::logic_error("solve_linear residual check failed");
  }
  return x;
}

// Sparse vector as (index, value) pairs sorted by index with no zero values.
using SparseVec = std::vector<std::pair<int, Scalar>>;

inline const Scalar* sparse_find(const SparseVec& v, int index) {
  auto it = std::lower_bound(v.begin(), v.end(), index, [](const auto& e, int i) { return e.first < i; });
  return it != v.end() && it->first == index ? &it->second : nullptr;
}

// a - factor * b
inline SparseVec sparse_axpy(const SparseVec& a, const Scalar& factor, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -(factor * b[j].second));
      ++j;
    } else {
      Scalar v = a[i].second - factor * b[j].second;
      if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace qaut
