#pragma once

// Degree-capped ideal membership. For a presentation and a cap K, the span of all
// L * r * R with |L| + |r| + |R| <= K is put in echelon form block by block (blocks are
// the torus weights every relation respects); reducing a target against it either
// reaches zero, giving an explicit certificate, or leaves a nonzero remainder.

#include "qaut/linear.hpp"
#include "qaut/presentation.hpp"
#include "qaut/scalar.hpp"
#include "qaut/tensor.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace qaut {

// One generated ideal element L * relation * R.
struct IdealColumn {
  std::size_t relation;
  Word left;
  Word right;
};

class IdealReducer {
 public:
  // `families` restricts the relations used; empty means all.
  IdealReducer(PresentationPtr p, int cap, std::set<std::string> families = {})
      : pres_(std::move(p)), cap_(cap), families_(std::move(families)) {
    if (cap_ < 0) throw std::invalid_argument("cap must be nonnegative");
    enumerate_words();
    enumerate_columns();
  }

  int cap() const { return cap_; }
  const PresentationPtr& presentation() const { return pres_; }
  std::size_t column_count() const { return column_total_; }

  struct Result {
    FreeElement remainder;
    std::vector<std::pair<IdealColumn, Scalar>> combination;  // target = sum coeff * column + remainder
  };

  // Reduces a z-free element. Words longer than the cap are left in the remainder.
  Result reduce(const FreeElement& target) const {
    Result out;
    std::map<std::string, FreeElement> by_weight;
    for (const auto& [w, c] : target) {
      if (w.power != 0) throw std::invalid_argument("reducer expects unitary-free words");
      by_weight[weight_key(w)].emplace(w, c);
    }
    for (const auto& [key, part] : by_weight) {
      const Block& b = block(key);
      reduce_in_block(b, part, out);
    }
    return out;
  }

 private:
  struct Pivot {
    int row;
    SparseVec vec;
    std::size_t column;                          // local column index
    std::vector<std::pair<int, Scalar>> history;  // vec = column - sum f * vec_j
  };
  struct Block {
    std::vector<IdealColumn> columns;
    std::map<Word, int> rows;
    std::vector<Word> row_words;
    std::vector<Pivot> pivots;
    std::unordered_map<int, int> pivot_of_row;
  };

  std::string weight_key(const Word& w) const {
    std::vector<int> acc(static_cast<std::size_t>(2 * pres_->total_indices()), 0);
    for (Letter g : w.letters) {
      const auto& lw = pres_->letter_weight(g);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += lw[i];
    }
    return encode(acc);
  }

  static std::string encode(const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += static_cast<char>(x + 64);
    return s;
  }

  static std::vector<int> decode(const std::string& s) {
    std::vector<int> v;
    for (char c : s) v.push_back(static_cast<int>(c) - 64);
    return v;
  }

  void enumerate_words() {
    const int maxlen = std::max(0, cap_ - 1);
    words_.push_back(Word{});
    std::size_t begin = 0;
    for (int len = 1; len <= maxlen; ++len) {
      const std::size_t end = words_.size();
      for (std::size_t i = begin; i < end; ++i)
        for (Letter g = 0; g < pres_->letter_count(); ++g) {
          Word w = words_[i];
          w.letters.push_back(g);
          words_.push_back(std::move(w));
        }
      begin = end;
    }
    for (std::size_t i = 0; i < words_.size(); ++i) word_weight_.push_back(decode(weight_key(words_[i])));
    for (std::size_t i = 0; i < words_.size(); ++i) by_weight_[encode(word_weight_[i])].push_back(i);
  }

  void enumerate_columns() {
    const std::size_t dims = static_cast<std::size_t>(2 * pres_->total_indices());
    for (std::size_t r = 0; r < pres_->relations.size(); ++r) {
      const Relation& rel = pres_->relations[r];
      if (!families_.empty() && !families_.count(rel.family)) continue;
      std::size_t rlen = 0;
      for (const auto& [w, c] : rel.element) rlen = std::max(rlen, w.length());
      if (static_cast<int>(rlen) > cap_) continue;
      const std::vector<int> rw = decode(weight_key(rel.element.begin()->first));
      const std::size_t room = static_cast<std::size_t>(cap_) - rlen;
      for (std::size_t li = 0; li < words_.size() && words_[li].length() <= room; ++li)
        for (std::size_t ri = 0; ri < words_.size() && words_[li].length() + words_[ri].length() <= room; ++ri) {
          std::vector<int> w(dims);
          for (std::size_t d = 0; d < dims; ++d) w[d] = rw[d] + word_weight_[li][d] + word_weight_[ri][d];
          column_index_[encode(w)].push_back({r, li, ri});
          ++column_total_;
        }
    }
  }

  const Block& block(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = blocks_.find(key);
    if (it != blocks_.end()) return *it->second;
    auto b = std::make_unique<Block>();
    build(key, *b);
    return *blocks_.emplace(key, std::move(b)).first->second;
  }

  int row_of(Block& b, const Word& w) const {
    auto [it, inserted] = b.rows.try_emplace(w, static_cast<int>(b.row_words.size()));
    if (inserted) b.row_words.push_back(w);
    return it->second;
  }

  // Largest word among monomial entries, otherwise the largest word.
  int choose_pivot(const Block& b, const SparseVec& v) const {
    int best = -1;
    bool best_mono = false;
    for (const auto& [row, c] : v) {
      const bool mono = c.is_monomial() || c.is_rational();
      if (best < 0 || (mono && !best_mono) || (mono == best_mono && b.row_words[static_cast<std::size_t>(best)] < b.row_words[static_cast<std::size_t>(row)])) {
        best = row;
        best_mono = mono;
      }
    }
    return best;
  }

  // Eliminates pivot rows in insertion order; later pivots never reintroduce earlier pivot rows.
  template <typename OnStep>
  static void eliminate(const Block& b, SparseVec& v, OnStep&& on_step) {
    std::priority_queue<int, std::vector<int>, std::greater<>> heap;
    std::set<int> queued;
    auto enqueue = [&](const SparseVec& vec) {
      for (const auto& [row, c] : vec) {
        auto it = b.pivot_of_row.find(row);
        if (it != b.pivot_of_row.end() && queued.insert(it->second).second) heap.push(it->second);
      }
    };
    enqueue(v);
    while (!heap.empty()) {
      const int k = heap.top();
      heap.pop();
      queued.erase(k);
      const Pivot& p = b.pivots[static_cast<std::size_t>(k)];
      const Scalar* entry = sparse_find(v, p.row);
      if (!entry) continue;
      const Scalar f = *entry / *sparse_find(p.vec, p.row);
      v = sparse_axpy(v, f, p.vec);
      on_step(k, f);
      for (const auto& [row, c] : p.vec) {
        auto it = b.pivot_of_row.find(row);
        if (it != b.pivot_of_row.end() && it->second > k && queued.insert(it->second).second) heap.push(it->second);
      }
    }
  }

  void build(const std::string& key, Block& b) const {
    auto it = column_index_.find(key);
    if (it == column_index_.end()) return;
    for (const auto& [r, li, ri] : it->second) b.columns.push_back({r, words_[li], words_[ri]});
    std::vector<SparseVec> vecs;
    for (const auto& col : b.columns) {
      SparseVec v;
      for (const auto& [w, c] : pres_->relations[col.relation].element) {
        Word full = concat(concat(col.left, w), col.right);
        v.emplace_back(row_of(b, full), c);
      }
      std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      vecs.push_back(std::move(v));
    }
    std::vector<std::size_t> order(vecs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return vecs[x].size() < vecs[y].size(); });
    for (std::size_t c : order) {
      SparseVec v = std::move(vecs[c]);
      std::vector<std::pair<int, Scalar>> history;
      eliminate(b, v, [&](int k, const Scalar& f) { history.emplace_back(k, f); });
      if (v.empty()) continue;
      const int row = choose_pivot(b, v);
      b.pivot_of_row[row] = static_cast<int>(b.pivots.size());
      b.pivots.push_back(Pivot{row, std::move(v), c, std::move(history)});
    }
  }

  void reduce_in_block(const Block& b, const FreeElement& part, Result& out) const {
    SparseVec v;
    FreeElement outside;
    for (const auto& [w, c] : part) {
      auto it = b.rows.find(w);
      if (it == b.rows.end()) {
        outside.emplace(w, c);
      } else {
        v.emplace_back(it->second, c);
      }
    }
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::map<int, Scalar> used;
    eliminate(b, v, [&](int k, const Scalar& f) { used[k] += f; });
    for (const auto& [w, c] : outside) out.remainder.emplace(w, c);
    for (const auto& [row, c] : v) out.remainder.emplace(b.row_words[static_cast<std::size_t>(row)], c);
    // Unwind pivot histories into original columns, latest pivot first.
    std::map<std::size_t, Scalar> by_column;
    while (!used.empty()) {
      auto last = std::prev(used.end());
      const int k = last->first;
      const Scalar a = last->second;
      used.erase(last);
      if (a.is_zero()) continue;
      const Pivot& p = b.pivots[static_cast<std::size_t>(k)];
      by_column[p.column] += a;
      for (const auto& [j, f] : p.history) used[j] -= a * f;
    }
    for (const auto& [c, a] : by_column)
      if (!a.is_zero()) out.combination.emplace_back(b.columns[c], a);
  }

  PresentationPtr pres_;
  int cap_;
  std::set<std::string> families_;
  std::vector<Word> words_;
  std::vector<std::vector<int>> word_weight_;
  std::map<std::string, std::vector<std::size_t>> by_weight_;
  struct ColumnRef {
    std::size_t relation, left, right;
  };
  std::unordered_map<std::string, std::vector<ColumnRef>> column_index_;
  std::size_t column_total_ = 0;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::unique_ptr<Block>> blocks_;
};

// Reducers are shared per (presentation, cap, family filter).
inline std::shared_ptr<const IdealReducer> shared_reducer(const PresentationPtr& p, int cap, const std::set<std::string>& families = {}) {
  static std::mutex mutex;
  static std::map<std::tuple<const Presentation*, int, std::set<std::string>>, std::pair<PresentationPtr, std::shared_ptr<const IdealReducer>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(p.get(), cap, families);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second.second;
  auto r = std::make_shared<const IdealReducer>(p, cap, families);
  cache.emplace(key, std::make_pair(p, r));
  return r;
}

struct CertificateTerm {
  std::size_t relation = 0;
  std::size_t slot = 0;
  Word left;  // may carry a unitary prefix
  Word right;
  TensorElement::Key other;  // words of the remaining slots, slot `slot` omitted
  Scalar coeff;
};

struct Certificate {
  TensorElement target;
  PresentationPtr presentation;
  int cap = 0;
  std::vector<CertificateTerm> terms;
};

struct Inconclusive {
  int cap = 0;
  TensorElement remainder;
};

using CertifyResult = std::variant<Certificate, Inconclusive>;

inline bool certified(const CertifyResult& r) { return std::holds_alternative<Certificate>(r); }

struct CertifyOptions {
  int cap = 3;
  int min_cap = -1;  // start of the deepening; defaults to the longest target word
  std::set<std::string> families{};
};

namespace detail {

inline TensorElement::Key with_slot(const TensorElement::Key& other, std::size_t slot, const Word& w) {
  TensorElement::Key k;
  k.insert(k.end(), other.begin(), other.begin() + static_cast<std::ptrdiff_t>(slot));
  k.push_back(w);
  k.insert(k.end(), other.begin() + static_cast<std::ptrdiff_t>(slot), other.end());
  return k;
}

inline TensorElement::Key without_slot(const TensorElement::Key& k, std::size_t slot) {
  TensorElement::Key o;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (i != slot) o.push_back(k[i]);
  return o;
}

// Reduces every presented slot in turn at a fixed cap.
inline std::optional<Certificate> certify_at(const TensorElement& target, const PresentationPtr& p, int cap, const std::set<std::string>& families,
                                             TensorElement* remainder_out) {
  const TensorSpace& sp = *target.space();
  auto reducer = shared_reducer(p, cap, families);
  Certificate cert{target, p, cap, {}};
  TensorElement current = target;
  for (std::size_t s = 0; s < sp.size(); ++s) {
    if (sp.slots[s].kind() != SlotKind::presented) continue;
    if (sp.slots[s].presentation() != p) throw std::invalid_argument("certification against a different presentation");
    std::map<std::pair<int, TensorElement::Key>, FreeElement> groups;
    for (const auto& [k, c] : current.terms()) {
      Word letters{0, k[s].letters};
      groups[{k[s].power, without_slot(k, s)}].emplace(std::move(letters), c);
    }
    TensorElement next(current.space());
    for (const auto& [gk, elem] : groups) {
      const auto& [power, other] = gk;
      const auto res = reducer->reduce(elem);
      for (const auto& [w, c] : res.remainder) next.add_term(with_slot(other, s, Word{power, w.letters}), c);
      for (const auto& [col, c] : res.combination)
        cert.terms.push_back({col.relation, s, Word{power, col.left.letters}, col.right, other, c});
    }
    current = std::move(next);
  }
  if (!current.is_zero()) {
    if (remainder_out) *remainder_out = current;
    return std::nullopt;
  }
  return cert;
}

}  // namespace detail

inline std::size_t max_presented_length(const TensorElement& t) {
  std::size_t m = 0;
  for (std::size_t s = 0; s < t.space()->size(); ++s)
    if (t.space()->slots[s].kind() == SlotKind::presented) m = std::max(m, t.max_length(s));
  return m;
}

// Iterative deepening from the longest target word up to opt.cap.
inline CertifyResult certify_zero(const TensorElement& target, const PresentationPtr& p, const CertifyOptions& opt = {}) {
  const int need = static_cast<int>(max_presented_length(target));
  if (opt.cap < need) throw std::invalid_argument("cap " + std::to_string(opt.cap) + " is below the target word length " + std::to_string(need));
  TensorElement rem = target;
  for (int cap = std::max(opt.min_cap, need); cap <= opt.cap; ++cap) {
    if (auto c = detail::certify_at(target, p, cap, opt.families, &rem)) return *c;
  }
  return Inconclusive{opt.cap, rem};
}

// Re-expands a certificate from the relations and compares with its target exactly.
inline TensorElement expand_certificate(const Certificate& c, const std::function<Scalar(const Scalar&)>& map_scalar = {}) {
  const TensorSpacePtr& space = c.target.space();
  TensorElement sum(space);
  auto conv = [&](const Scalar& s) { return map_scalar ? map_scalar(s) : s; };
  for (const auto& t : c.terms) {
    const auto& rel = c.presentation->relations.at(t.relation).element;
    const SlotAlgebra& slot = space->slots.at(t.slot);
    for (const auto& [w, rc] : rel) {
      auto lw = slot.multiply(t.left, w);
      auto full = slot.multiply(lw->word, t.right);
      const long long e = lw->exponent + full->exponent;
      sum.add_term(detail::with_slot(t.other, t.slot, full->word), conv(t.coeff) * conv(rc) * conv(phase(e, c.presentation->mode)));
    }
  }
  return sum;
}

inline bool replay(const Certificate& c) { return expand_certificate(c) == c.target; }

// Specialises a generic certificate's coefficients, relations and target to a root of unity and replays.
inline bool replay_specialized(const Certificate& c, ZetaMode root, TensorElement* specialized_target = nullptr) {
  auto spec = [&](const Scalar& s) { return s.specialize(root); };
  TensorElement lhs = expand_certificate(c, spec);
  TensorElement rhs(c.target.space());
  for (const auto& [k, v] : c.target.terms()) rhs.add_term(k, v.specialize(root));
  if (specialized_target) *specialized_target = rhs;
  return lhs.terms() == rhs.terms();
}

// Certifies M = identity entrywise.
struct MatrixCertification {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, CertifyResult>> entries;
  bool all_certified() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return certified(e.second); });
  }
};

inline MatrixCertification matrix_is_identity(const MatrixOverAlgebra& m, const PresentationPtr& p, const CertifyOptions& opt = {}) {
  MatrixCertification out;
  const TensorElement one = TensorElement::unit(m.space());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) {
      TensorElement t = i == j ? m(i, j) - one : m(i, j);
      out.entries.push_back({{i, j}, certify_zero(t, p, opt)});
    }
  return out;
}

}  // namespace qaut
