#pragma once

// Braided tensor product of graded matrix algebras realised on L1 (x) L2.

#include "qaut/graded_algebra.hpp"
#include "qaut/linear.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qaut {

struct GradedSpace {
  std::vector<int> degrees;

  std::size_t dim() const { return degrees.size(); }

  // Basis order of L1 (x) L2: index m * dim2 + n, degree l1_m + l2_n.
  friend GradedSpace tensor(const GradedSpace& a, const GradedSpace& b) {
    GradedSpace r;
    for (int x : a.degrees)
      for (int y : b.degrees) r.degrees.push_back(x + y);
    return r;
  }
};

// Column space of a block algebra: one basis vector per (block, row) with degree d^x_i.
inline GradedSpace column_space(const GradingSpec& spec) {
  GradedSpace l;
  for (const auto& b : spec.degrees()) l.degrees.insert(l.degrees.end(), b.begin(), b.end());
  return l;
}

// Phase permutation L1 (x) L2 -> L2 (x) L1 together with its inverse, stored sparsely:
// entry k of `forward` is the (target index, phase) image of source basis vector k.
struct BraidingUnitary {
  GradedSpace first;
  GradedSpace second;
  std::vector<std::pair<std::size_t, Scalar>> forward;
  std::vector<std::pair<std::size_t, Scalar>> inverse;  // indexed by L2 (x) L1 basis

  ScalarMatrix forward_matrix() const { return to_matrix(forward); }
  ScalarMatrix inverse_matrix() const { return to_matrix(inverse); }

  // Checks inverse o forward = id and forward o inverse = id entry by entry.
  bool inverse_exact() const {
    for (std::size_t k = 0; k < forward.size(); ++k) {
      const auto& [t, p] = forward[k];
      const auto& [back, q] = inverse[t];
      if (back != k || !(q * p).is_one()) return false;
    }
    for (std::size_t k = 0; k < inverse.size(); ++k) {
      const auto& [t, p] = inverse[k];
      const auto& [back, q] = forward[t];
      if (back != k || !(q * p).is_one()) return false;
    }
    return true;
  }

 private:
  static ScalarMatrix to_matrix(const std::vector<std::pair<std::size_t, Scalar>>& map) {
    ScalarMatrix m(map.size(), map.size());
    for (std::size_t k = 0; k < map.size(); ++k) m(map[k].first, k) = map[k].second;
    return m;
  }
};

inline BraidingUnitary braiding(const GradedSpace& l1, const GradedSpace& l2, ZetaMode mode) {
  BraidingUnitary psi;
  psi.first = l1;
  psi.second = l2;
  const std::size_t d1 = l1.dim(), d2 = l2.dim();
  psi.forward.resize(d1 * d2);
  psi.inverse.resize(d1 * d2);
  for (std::size_t m = 0; m < d1; ++m) {
    for (std::size_t n = 0; n < d2; ++n) {
      const long long e = static_cast<long long>(l1.degrees[m]) * l2.degrees[n];
      psi.forward[m * d2 + n] = {n * d1 + m, phase(e, mode)};
      psi.inverse[n * d1 + m] = {m * d2 + n, phase(-e, mode)};
    }
  }
  return psi;
}

// a acting on L1, extended by the identity on L2.
inline ScalarMatrix embed_left(const ScalarMatrix& a, const GradedSpace& l2) {
  return kron(a, ScalarMatrix::identity(l2.dim()));
}

// b acting on L2, transported to L1 (x) L2 through the braiding: Psi_{L2,L1} (b (x) 1) Psi_{L2,L1}^{-1}.
inline ScalarMatrix embed_right(const ScalarMatrix& b, const GradedSpace& l1, const GradedSpace& l2, ZetaMode mode) {
  const BraidingUnitary psi = braiding(l2, l1, mode);
  return psi.forward_matrix() * kron(b, ScalarMatrix::identity(l1.dim())) * psi.inverse_matrix();
}

// Matrix of an algebra element acting on its column space.
inline ScalarMatrix representation_matrix(const AlgebraElement& a) {
  const GradedAlgebra& alg = *a.parent();
  const std::size_t n = static_cast<std::size_t>(alg.spec().total());
  ScalarMatrix m(n, n);
  for (const auto& [b, c] : a.terms()) {
    const auto& e = alg.basis(b);
    const int off = alg.spec().offset(e.block);
    m(static_cast<std::size_t>(off + e.row), static_cast<std::size_t>(off + e.col)) += c;
  }
  return m;
}

class BraidedTensorAlgebra {
 public:
  BraidedTensorAlgebra(std::shared_ptr<const GradedAlgebra> d1, std::shared_ptr<const GradedAlgebra> d2, ZetaMode mode)
      : d1_(std::move(d1)), d2_(std::move(d2)), mode_(mode), l1_(column_space(d1_->spec())), l2_(column_space(d2_->spec())) {}

  const GradedAlgebra& first() const { return *d1_; }
  const GradedAlgebra& second() const { return *d2_; }
  ZetaMode mode() const { return mode_; }
  const GradedSpace& first_space() const { return l1_; }
  const GradedSpace& second_space() const { return l2_; }
  GradedSpace carrier_space() const { return tensor(l1_, l2_); }

  ScalarMatrix j1(const AlgebraElement& a) const { return embed_left(representation_matrix(a), l2_); }
  ScalarMatrix j2(const AlgebraElement& b) const { return embed_right(representation_matrix(b), l1_, l2_, mode_); }

  // Rank of span{ j1(E) j2(F) } over matrix-unit pairs.
  std::size_t carrier_rank() const {
    std::vector<ScalarMatrix> products;
    for (int a = 0; a < d1_->dim(); ++a) {
      AlgebraElement ea(d1_);
      ea.add_term(a, Scalar(1));
      const ScalarMatrix ja = j1(ea);
      for (int b = 0; b < d2_->dim(); ++b) {
        AlgebraElement eb(d2_);
        eb.add_term(b, Scalar(1));
        products.push_back(ja * j2(eb));
      }
    }
    const std::size_t n = carrier_space().dim();
    ScalarMatrix stacked(n * n, products.size());
    for (std::size_t c = 0; c < products.size(); ++c)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) stacked(r * n + s, c) = products[c](r, s);
    return matrix_rank(stacked);
  }

  static std::size_t matrix_rank(ScalarMatrix a) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
      std::size_t piv = rank;
      while (piv < a.rows() && a(piv, col).is_zero()) ++piv;
      if (piv == a.rows()) continue;
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(rank, j), a(piv, j));
      const Scalar inv = a(rank, col).inverse();
      for (std::size_t r = rank + 1; r < a.rows(); ++r) {
        if (a(r, col).is_zero()) continue;
        const Scalar f = a(r, col) * inv;
        for (std::size_t j = col; j < a.cols(); ++j)
          if (!a(rank, j).is_zero()) a(r, j) -= f * a(rank, j);
      }
      ++rank;
    }
    return rank;
  }

 private:
  std::shared_ptr<const GradedAlgebra> d1_, d2_;
  ZetaMode mode_;
  GradedSpace l1_, l2_;
};

inline BraidedTensorAlgebra braided_product(std::shared_ptr<const GradedAlgebra> d1, std::shared_ptr<const GradedAlgebra> d2,
                                            ZetaMode mode) {
  return BraidedTensorAlgebra(std::move(d1), std::move(d2), mode);
}

struct CommutationViolation {
  int first_basis;
  int second_basis;
};

struct CommutationReport {
  std::size_t pairs_checked = 0;
  std::vector<CommutationViolation> violations;
  bool ok() const { return violations.empty(); }
};

// j1(a) j2(b) = zeta^{-deg a deg b} j2(b) j1(a) for every pair of matrix units.
inline CommutationReport check_commutation_phase(const BraidedTensorAlgebra& t) {
  CommutationReport report;
  const auto& d1 = t.first();
  const auto& d2 = t.second();
  std::vector<ScalarMatrix> left, right;
  for (int a = 0; a < d1.dim(); ++a) {
    AlgebraElement e(d1.shared_from_this());
    e.add_term(a, Scalar(1));
    left.push_back(t.j1(e));
  }
  for (int b = 0; b < d2.dim(); ++b) {
    AlgebraElement e(d2.shared_from_this());
    e.add_term(b, Scalar(1));
    right.push_back(t.j2(e));
  }
  for (int a = 0; a < d1.dim(); ++a) {
    for (int b = 0; b < d2.dim(); ++b) {
      ++report.pairs_checked;
      const Scalar ph = r_matrix(d1.degree(a), d2.degree(b), t.mode());
      const ScalarMatrix lhs = left[static_cast<std::size_t>(a)] * right[static_cast<std::size_t>(b)];
      const ScalarMatrix rhs = (right[static_cast<std::size_t>(b)] * left[static_cast<std::size_t>(a)]).scaled(ph);
      if (!(lhs == rhs)) report.violations.push_back({a, b});
    }
  }
  return report;
}

}  // namespace qaut
