#pragma once

// Finite direct sums of matrix algebras with a circle grading E_{ij,x} -> d^x_i - d^x_j.

#include "qaut/scalar.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qaut {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Block sizes and per-block degree lists. Degrees are stored sorted; `permutation`
// records, for each block, the input position of every sorted entry.
class GradingSpec {
 public:
  GradingSpec() = default;

  static GradingSpec make(std::vector<std::vector<int>> degrees) {
    if (degrees.empty()) throw SpecError("grading spec has no blocks");
    GradingSpec s;
    for (auto& block : degrees) {
      if (block.empty()) throw SpecError("block of size zero");
      std::vector<int> order(block.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return block[static_cast<std::size_t>(a)] < block[static_cast<std::size_t>(b)]; });
      std::vector<int> sorted;
      for (int o : order) sorted.push_back(block[static_cast<std::size_t>(o)]);
      if (sorted.size() == 1 && sorted[0] != 0)
        throw SpecError(
            "a size-1 block cannot carry a nonzero degree: a circle action on commuting projections is trivial");
      s.degrees_.push_back(std::move(sorted));
      s.permutation_.push_back(std::move(order));
    }
    int off = 0;
    for (const auto& b : s.degrees_) {
      s.offsets_.push_back(off);
      off += static_cast<int>(b.size());
    }
    s.total_ = off;
    return s;
  }

  static GradingSpec single(std::vector<int> degrees) { return make({std::move(degrees)}); }

  int blocks() const { return static_cast<int>(degrees_.size()); }
  int size(int block) const { return static_cast<int>(degrees_.at(static_cast<std::size_t>(block)).size()); }
  // 0-based block and index.
  int degree(int block, int i) const { return degrees_.at(static_cast<std::size_t>(block)).at(static_cast<std::size_t>(i)); }
  int offset(int block) const { return offsets_.at(static_cast<std::size_t>(block)); }
  int total() const { return total_; }
  const std::vector<std::vector<int>>& degrees() const { return degrees_; }
  const std::vector<std::vector<int>>& permutation() const { return permutation_; }
  bool was_reordered() const {
    for (const auto& p : permutation_)
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i)) return true;
    return false;
  }
  bool trivially_graded() const {
    for (const auto& b : degrees_)
      for (int d : b)
        if (d != b.front()) return false;
    return true;
  }

  // "block 2 degrees 0 1; block 1 degrees 0;"
  std::string to_string() const {
    std::string out;
    for (const auto& b : degrees_) {
      if (!out.empty()) out += " ";
      out += "block " + std::to_string(b.size()) + " degrees";
      for (int d : b) out += " " + std::to_string(d);
      out += ";";
    }
    return out;
  }

  friend bool operator==(const GradingSpec& a, const GradingSpec& b) { return a.degrees_ == b.degrees_; }

 private:
  std::vector<std::vector<int>> degrees_;
  std::vector<std::vector<int>> permutation_;
  std::vector<int> offsets_;
  int total_ = 0;
};

enum class FunctionalChoice { normalized_trace, block_delta };

struct BasisIndex {
  int block;  // 0-based
  int row;    // 0-based
  int col;    // 0-based
};

class GradedAlgebra;

// Sparse linear combination of matrix units of one algebra.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(std::shared_ptr<const GradedAlgebra> parent) : parent_(std::move(parent)) {}

  const std::shared_ptr<const GradedAlgebra>& parent() const { return parent_; }
  const std::map<int, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(int basis, const Scalar& c) {
    if (c.is_zero()) return;
    Scalar& slot = terms_[basis];
    slot += c;
    if (slot.is_zero()) terms_.erase(basis);
  }

  Scalar coefficient(int basis) const {
    auto it = terms_.find(basis);
    return it == terms_.end() ? Scalar() : it->second;
  }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    check_parent(a, b);
    AlgebraElement r(a);
    for (const auto& [k, v] : b.terms_) r.add_term(k, v);
    return r;
  }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    check_parent(a, b);
    AlgebraElement r(a);
    for (const auto& [k, v] : b.terms_) r.add_term(k, -v);
    return r;
  }
  friend AlgebraElement operator*(const Scalar& s, const AlgebraElement& a) {
    AlgebraElement r(a.parent_);
    for (const auto& [k, v] : a.terms_) r.add_term(k, s * v);
    return r;
  }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.parent_ == b.parent_ && a.terms_ == b.terms_;
  }

  static void check_parent(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.parent_ != b.parent_) throw std::invalid_argument("elements belong to different algebras");
  }

 private:
  std::shared_ptr<const GradedAlgebra> parent_;
  std::map<int, Scalar> terms_;
};

class GradedAlgebra : public std::enable_shared_from_this<GradedAlgebra> {
 public:
  GradedAlgebra(GradingSpec spec, FunctionalChoice functional, ZetaMode mode)
      : spec_(std::move(spec)), functional_(functional), mode_(mode) {
    for (int x = 0; x < spec_.blocks(); ++x) {
      block_start_.push_back(static_cast<int>(basis_.size()));
      for (int i = 0; i < spec_.size(x); ++i)
        for (int j = 0; j < spec_.size(x); ++j) basis_.push_back({x, i, j});
    }
  }

  const GradingSpec& spec() const { return spec_; }
  FunctionalChoice functional_choice() const { return functional_; }
  ZetaMode mode() const { return mode_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const BasisIndex& basis(int b) const { return basis_.at(static_cast<std::size_t>(b)); }

  // 0-based indices.
  int index(int block, int row, int col) const {
    const int n = spec_.size(block);
    if (row < 0 || row >= n || col < 0 || col >= n) throw std::out_of_range("matrix unit index out of range");
    return block_start_[static_cast<std::size_t>(block)] + row * n + col;
  }

  int degree(int b) const {
    const auto& e = basis(b);
    return spec_.degree(e.block, e.row) - spec_.degree(e.block, e.col);
  }

  std::optional<int> product(int a, int b) const {
    const auto& ea = basis(a);
    const auto& eb = basis(b);
    if (ea.block != eb.block || ea.col != eb.row) return std::nullopt;
    return index(ea.block, ea.row, eb.col);
  }

  int star_index(int b) const {
    const auto& e = basis(b);
    return index(e.block, e.col, e.row);
  }

  Scalar functional_value(int b) const {
    const auto& e = basis(b);
    if (e.row != e.col) return Scalar();
    if (functional_ == FunctionalChoice::block_delta) return Scalar(1);
    return Scalar::rational(1, spec_.size(e.block));
  }

  std::string basis_name(int b) const {
    const auto& e = basis(b);
    std::string s = "E(" + std::to_string(e.row + 1) + "," + std::to_string(e.col + 1);
    if (spec_.blocks() > 1) s += ";" + std::to_string(e.block + 1);
    return s + ")";
  }

  // Matrix unit E_{ij,x}, 1-based.
  AlgebraElement e(int i, int j, int block = 1) const {
    AlgebraElement r(shared_from_this());
    r.add_term(index(block - 1, i - 1, j - 1), Scalar(1));
    return r;
  }

  AlgebraElement unit() const {
    AlgebraElement r(shared_from_this());
    for (int x = 0; x < spec_.blocks(); ++x)
      for (int i = 0; i < spec_.size(x); ++i) r.add_term(index(x, i, i), Scalar(1));
    return r;
  }

  AlgebraElement zero() const { return AlgebraElement(shared_from_this()); }

  AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) const {
    own(a);
    own(b);
    AlgebraElement r(shared_from_this());
    for (const auto& [ka, va] : a.terms())
      for (const auto& [kb, vb] : b.terms())
        if (auto p = product(ka, kb)) r.add_term(*p, va * vb);
    return r;
  }

  AlgebraElement star(const AlgebraElement& a) const {
    own(a);
    AlgebraElement r(shared_from_this());
    for (const auto& [k, v] : a.terms()) r.add_term(star_index(k), v.star());
    return r;
  }

  // Circle action at z = zeta^k: each E_{ij,x} is scaled by zeta^{k deg}.
  AlgebraElement apply_action(long long z_exponent, const AlgebraElement& a) const {
    own(a);
    AlgebraElement r(shared_from_this());
    for (const auto& [k, v] : a.terms()) r.add_term(k, phase(z_exponent * degree(k), mode_) * v);
    return r;
  }

  Scalar apply_functional(const AlgebraElement& a) const {
    own(a);
    Scalar acc;
    for (const auto& [k, v] : a.terms()) acc += functional_value(k) * v;
    return acc;
  }

  // Homogeneous degree, or nullopt for zero / mixed-degree elements.
  std::optional<int> homogeneous_degree(const AlgebraElement& a) const {
    own(a);
    std::optional<int> d;
    for (const auto& [k, v] : a.terms()) {
      if (d && *d != degree(k)) return std::nullopt;
      d = degree(k);
    }
    return d;
  }

 private:
  void own(const AlgebraElement& a) const {
    if (a.parent().get() != this) throw std::invalid_argument("element belongs to a different algebra");
  }

  GradingSpec spec_;
  FunctionalChoice functional_;
  ZetaMode mode_;
  std::vector<BasisIndex> basis_;
  std::vector<int> block_start_;
};

inline std::shared_ptr<const GradedAlgebra> make_matrix_algebra(const GradingSpec& spec, FunctionalChoice functional,
                                                               ZetaMode mode) {
  if (spec.blocks() == 0) throw SpecError("grading spec has no blocks");
  return std::make_shared<const GradedAlgebra>(spec, functional, mode);
}

}  // namespace qaut
