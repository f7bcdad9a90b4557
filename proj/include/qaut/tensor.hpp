#pragma once

// Tensor powers of monomial *-algebras: presented slots (free words with a unitary
// prefix), concrete matrix slots and crossed-product slots, multiplied with or
// without braiding phases.

#include "qaut/graded_algebra.hpp"
#include "qaut/presentation.hpp"
#include "qaut/scalar.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qaut {

enum class SlotKind { presented, matrix, crossed };

// A word times zeta^exponent; every slot algebra multiplies and stars basis words to this shape or zero.
struct PhasedWord {
  Word word;
  long long exponent = 0;
};

class SlotAlgebra {
 public:
  static SlotAlgebra presented(PresentationPtr p) {
    SlotAlgebra s;
    s.kind_ = SlotKind::presented;
    s.mode_ = p->mode;
    s.pres_ = std::move(p);
    return s;
  }
  static SlotAlgebra matrix(std::shared_ptr<const GradedAlgebra> a) {
    SlotAlgebra s;
    s.kind_ = SlotKind::matrix;
    s.mode_ = a->mode();
    s.alg_ = std::move(a);
    return s;
  }
  static SlotAlgebra crossed(std::shared_ptr<const GradedAlgebra> a) {
    SlotAlgebra s = matrix(std::move(a));
    s.kind_ = SlotKind::crossed;
    return s;
  }

  SlotKind kind() const { return kind_; }
  ZetaMode mode() const { return mode_; }
  const PresentationPtr& presentation() const { return pres_; }
  const std::shared_ptr<const GradedAlgebra>& algebra() const { return alg_; }

  std::string descriptor() const {
    switch (kind_) {
      case SlotKind::presented: return "presented";
      case SlotKind::matrix: return "matrix";
      case SlotKind::crossed: return "crossed";
    }
    return "?";
  }

  // Circle degree used by the braiding.
  int degree(const Word& w) const {
    if (kind_ == SlotKind::presented) return pres_->word_degree(w);
    return w.letters.empty() ? 0 : alg_->degree(w.letters.front());
  }

  std::vector<Word> unit() const {
    if (kind_ == SlotKind::presented) return {Word{}};
    std::vector<Word> out;
    const auto& sp = alg_->spec();
    for (int x = 0; x < sp.blocks(); ++x)
      for (int i = 0; i < sp.size(x); ++i) out.push_back(Word{0, {static_cast<Letter>(alg_->index(x, i, i))}});
    return out;
  }

  std::optional<PhasedWord> multiply(const Word& a, const Word& b) const {
    switch (kind_) {
      case SlotKind::presented:
        // (z^p a)(z^q b) = zeta^{q deg a} z^{p+q} ab
        return PhasedWord{concat(a, b), static_cast<long long>(b.power) * pres_->word_degree(a)};
      case SlotKind::matrix:
      case SlotKind::crossed: {
        auto p = alg_->product(a.letters.front(), b.letters.front());
        if (!p) return std::nullopt;
        // (v^r E)(v^s F) = zeta^{s deg E} v^{r+s} EF
        return PhasedWord{Word{a.power + b.power, {static_cast<Letter>(*p)}}, static_cast<long long>(b.power) * alg_->degree(a.letters.front())};
      }
    }
    return std::nullopt;
  }

  PhasedWord star(const Word& a) const {
    if (kind_ == SlotKind::presented) {
      PhasedWord r;
      r.word.power = -a.power;
      for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) {
        const auto& g = pres_->generator(*it);
        r.word.letters.push_back(g.star_letter);
        r.exponent += g.star_exponent;
      }
      // (z^p w)* = zeta^{p deg w} z^{-p} w*
      r.exponent += static_cast<long long>(a.power) * pres_->word_degree(a);
      return r;
    }
    const int b = a.letters.front();
    return PhasedWord{Word{-a.power, {static_cast<Letter>(alg_->star_index(b))}}, static_cast<long long>(a.power) * alg_->degree(b)};
  }

  std::string name(const Word& w) const {
    if (kind_ == SlotKind::presented) return pres_->word_name(w);
    std::string out;
    if (w.power != 0) out = w.power == 1 ? "v" : "v^" + std::to_string(w.power);
    if (!w.letters.empty()) out += (out.empty() ? "" : ".") + alg_->basis_name(w.letters.front());
    return out.empty() ? "1" : out;
  }

  // Parses a dot-separated product of raw symbols and multiplies it out.
  std::vector<std::pair<Word, long long>> parse_word(const std::string& text) const;

  friend bool operator==(const SlotAlgebra& a, const SlotAlgebra& b) {
    return a.kind_ == b.kind_ && a.pres_ == b.pres_ && a.alg_ == b.alg_;
  }

 private:
  SlotKind kind_ = SlotKind::presented;
  ZetaMode mode_ = ZetaMode::generic();
  PresentationPtr pres_;
  std::shared_ptr<const GradedAlgebra> alg_;
};

struct TensorSpace {
  std::vector<SlotAlgebra> slots;
  bool braided = false;
  ZetaMode mode = ZetaMode::generic();

  std::size_t size() const { return slots.size(); }
  std::string descriptor() const {
    std::string s = braided ? "braided" : "ordinary";
    for (const auto& sl : slots) s += " " + sl.descriptor();
    return s;
  }
};

using TensorSpacePtr = std::shared_ptr<const TensorSpace>;

inline TensorSpacePtr make_space(std::vector<SlotAlgebra> slots, bool braided) {
  if (slots.empty()) throw std::invalid_argument("tensor space needs at least one slot");
  auto s = std::make_shared<TensorSpace>();
  s->mode = slots.front().mode();
  for (const auto& sl : slots)
    if (!(sl.mode() == s->mode)) throw std::invalid_argument("slots use different zeta modes");
  s->slots = std::move(slots);
  s->braided = braided;
  return s;
}

// The k-fold tensor power of a presentation, braided exactly when the presentation is.
inline TensorSpacePtr tensor_power(const PresentationPtr& p, std::size_t k) {
  return make_space(std::vector<SlotAlgebra>(k, SlotAlgebra::presented(p)), p->braided());
}

class TensorElement {
 public:
  using Key = std::vector<Word>;

  TensorElement() = default;
  explicit TensorElement(TensorSpacePtr space) : space_(std::move(space)) {}

  const TensorSpacePtr& space() const { return space_; }
  const std::map<Key, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  static TensorElement unit(TensorSpacePtr space) {
    TensorElement r(space);
    std::vector<Key> keys{{}};
    for (const auto& sl : space->slots) {
      std::vector<Key> next;
      for (const auto& k : keys)
        for (const auto& w : sl.unit()) {
          Key nk = k;
          nk.push_back(w);
          next.push_back(std::move(nk));
        }
      keys = std::move(next);
    }
    for (auto& k : keys) r.add_term(k, Scalar(1));
    return r;
  }

  static TensorElement monomial(TensorSpacePtr space, Key words, const Scalar& c = Scalar(1)) {
    if (words.size() != space->size()) throw std::invalid_argument("slot count mismatch");
    TensorElement r(std::move(space));
    r.add_term(std::move(words), c);
    return r;
  }

  void add_term(const Key& k, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Scalar coefficient(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Scalar() : it->second;
  }

  std::size_t max_length(std::size_t slot) const {
    std::size_t m = 0;
    for (const auto& [k, c] : terms_) m = std::max(m, k[slot].length());
    return m;
  }

  TensorElement& operator+=(const TensorElement& b) {
    check(b);
    for (const auto& [k, c] : b.terms_) add_term(k, c);
    return *this;
  }
  TensorElement& operator-=(const TensorElement& b) {
    check(b);
    for (const auto& [k, c] : b.terms_) add_term(k, -c);
    return *this;
  }
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
  friend TensorElement operator*(const Scalar& s, const TensorElement& a) {
    TensorElement r(a.space_);
    if (s.is_zero()) return r;
    for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, s * c);
    return r;
  }
  friend bool operator==(const TensorElement& a, const TensorElement& b) { return a.terms_ == b.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + c.to_string() + ") " + key_name(k);
    }
    return out;
  }

  std::string key_name(const Key& k) const {
    std::string s;
    for (std::size_t i = 0; i < k.size(); ++i) s += (i ? " @ " : "") + space_->slots[i].name(k[i]);
    return s;
  }

 private:
  void check(const TensorElement& b) const {
    if (space_ && b.space_ && space_ != b.space_ && space_->size() != b.space_->size())
      throw std::invalid_argument("tensor elements from different spaces");
  }

  TensorSpacePtr space_;
  std::map<Key, Scalar> terms_;
};

// Product of basis tensors: slotwise products, plus the crossing phase zeta^{deg a_j deg b_i}
// for every i < j in braided spaces.
inline std::optional<PhasedWord> multiply_keys(const TensorSpace& sp, const TensorElement::Key& a, const TensorElement::Key& b,
                                               TensorElement::Key& out) {
  out.resize(sp.size());
  long long e = 0;
  for (std::size_t s = 0; s < sp.size(); ++s) {
    auto p = sp.slots[s].multiply(a[s], b[s]);
    if (!p) return std::nullopt;
    out[s] = std::move(p->word);
    e += p->exponent;
  }
  if (sp.braided) {
    for (std::size_t j = 1; j < sp.size(); ++j) {
      const long long dj = sp.slots[j].degree(a[j]);
      if (dj == 0) continue;
      for (std::size_t i = 0; i < j; ++i) e += dj * sp.slots[i].degree(b[i]);
    }
  }
  return PhasedWord{Word{}, e};
}

inline TensorElement tensor_multiply(const TensorElement& a, const TensorElement& b) {
  if (!a.space() || !b.space() || a.space()->size() != b.space()->size()) throw std::invalid_argument("slot count mismatch");
  const TensorSpace& sp = *a.space();
  TensorElement r(a.space());
  TensorElement::Key key;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      auto p = multiply_keys(sp, ka, kb, key);
      if (!p) continue;
      r.add_term(key, ca * cb * phase(p->exponent, sp.mode));
    }
  return r;
}

// (a_1 @ ... @ a_k)* = prod_{i<j} zeta^{deg a_i deg a_j} (a_1* @ ... @ a_k*) in braided spaces.
inline TensorElement tensor_star(const TensorElement& a) {
  const TensorSpace& sp = *a.space();
  TensorElement r(a.space());
  for (const auto& [k, c] : a.terms()) {
    TensorElement::Key out(k.size());
    long long e = 0;
    for (std::size_t s = 0; s < k.size(); ++s) {
      auto p = sp.slots[s].star(k[s]);
      out[s] = std::move(p.word);
      e += p.exponent;
    }
    if (sp.braided)
      for (std::size_t j = 1; j < k.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) e += static_cast<long long>(sp.slots[i].degree(k[i])) * sp.slots[j].degree(k[j]);
    r.add_term(out, c.star() * phase(e, sp.mode));
  }
  return r;
}

// Splices a tensor element into slot `slot` of a single key (elementwise map application).
inline void splice_into(TensorElement& acc, const TensorElement::Key& key, std::size_t slot, const TensorElement& image, const Scalar& c) {
  for (const auto& [ik, ic] : image.terms()) {
    TensorElement::Key k;
    k.insert(k.end(), key.begin(), key.begin() + static_cast<std::ptrdiff_t>(slot));
    k.insert(k.end(), ik.begin(), ik.end());
    k.insert(k.end(), key.begin() + static_cast<std::ptrdiff_t>(slot) + 1, key.end());
    acc.add_term(k, c * ic);
  }
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Splits on `sep` outside parentheses.
inline std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

struct RawSymbol {
  std::string name;
  bool starred = false;
  int power = 1;
};

inline RawSymbol parse_symbol(const std::string& text) {
  RawSymbol s;
  std::string t = trim(text);
  if (auto caret = t.rfind('^'); caret != std::string::npos && t.find(')', caret) == std::string::npos) {
    s.power = std::stoi(t.substr(caret + 1));
    t = trim(t.substr(0, caret));
  }
  if (!t.empty() && t.back() == '*') {
    s.starred = true;
    t = trim(t.substr(0, t.size() - 1));
  }
  s.name = t;
  if (s.name.empty()) throw std::invalid_argument("empty symbol");
  return s;
}

}  // namespace detail

inline std::vector<std::pair<Word, long long>> SlotAlgebra::parse_word(const std::string& text) const {
  using Acc = std::vector<std::pair<Word, long long>>;
  Acc acc = {{Word{}, 0}};
  if (kind_ != SlotKind::presented) {
    acc.clear();
    for (const auto& w : unit()) acc.emplace_back(w, 0);
  }
  auto times = [&](const Acc& lhs, const Acc& rhs) {
    Acc out;
    for (const auto& [a, ea] : lhs)
      for (const auto& [b, eb] : rhs)
        if (auto p = multiply(a, b)) out.emplace_back(p->word, ea + eb + p->exponent);
    return out;
  };
  const std::string t = detail::trim(text);
  if (t == "1") return acc;
  for (const auto& piece : detail::split_top(t, '.')) {
    const detail::RawSymbol sym = detail::parse_symbol(piece);
    Acc factor;
    const bool unitary = kind_ == SlotKind::presented ? pres_->has_unitary() && sym.name.size() == 1 && sym.name[0] == pres_->unitary_name()
                                                      : kind_ == SlotKind::crossed && sym.name == "v";
    if (unitary) {
      const int p = sym.starred ? -sym.power : sym.power;
      if (kind_ == SlotKind::presented) {
        factor.emplace_back(Word{p, {}}, 0);
      } else {
        for (const auto& w : unit()) factor.emplace_back(Word{p, w.letters}, 0);
      }
    } else {
      if (sym.power < 0) throw std::invalid_argument("negative power of a non-unitary symbol: " + piece);
      Word base;
      if (kind_ == SlotKind::presented) {
        auto g = pres_->parse_letter(sym.name);
        if (!g) throw std::invalid_argument("unknown generator: " + sym.name);
        base.letters = {*g};
      } else {
        bool found = false;
        for (int b = 0; b < alg_->dim(); ++b)
          if (alg_->basis_name(b) == sym.name) {
            base.letters = {static_cast<Letter>(b)};
            found = true;
          }
        if (!found) throw std::invalid_argument("unknown matrix unit: " + sym.name);
      }
      PhasedWord one{base, 0};
      if (sym.starred) one = star(base);
      factor = kind_ == SlotKind::presented ? Acc{{Word{}, 0}} : Acc{};
      if (kind_ != SlotKind::presented)
        for (const auto& w : unit()) factor.emplace_back(w, 0);
      for (int i = 0; i < sym.power; ++i) factor = times(factor, Acc{{one.word, one.exponent}});
    }
    acc = times(acc, factor);
  }
  return acc;
}

// Parses "(c) w1 @ w2 + (c') ..." where each word is a product of raw symbols (stars, inverse
// powers and unsorted factors allowed) and returns the normal-ordered element.
inline TensorElement parse_tensor(const TensorSpacePtr& space, const std::string& text) {
  TensorElement r(space);
  const std::string t = detail::trim(text);
  if (t == "0" || t.empty()) return r;
  for (const auto& raw : detail::split_top(t, '+')) {
    std::string term = detail::trim(raw);
    Scalar coeff(1);
    if (!term.empty() && term.front() == '(') {
      int depth = 0;
      std::size_t close = 0;
      for (std::size_t i = 0; i < term.size(); ++i) {
        if (term[i] == '(') ++depth;
        if (term[i] == ')' && --depth == 0) {
          close = i;
          break;
        }
      }
      coeff = Scalar::parse(term.substr(1, close - 1), space->mode);
      term = detail::trim(term.substr(close + 1));
    }
    const auto words = detail::split_top(term, '@');
    if (words.size() != space->size()) throw std::invalid_argument("term has wrong number of slots: " + term);
    TensorElement piece = TensorElement::monomial(space, TensorElement::Key(space->size()), coeff);
    // Build slotwise, then multiply so that braided phases are applied in the written order.
    for (std::size_t s = 0; s < words.size(); ++s) {
      TensorElement factor(space);
      TensorElement::Key base;
      for (std::size_t q = 0; q < space->size(); ++q) base.push_back(Word{});
      for (const auto& [w, e] : space->slots[s].parse_word(words[s])) {
        std::vector<TensorElement::Key> keys{base};
        keys.front()[s] = w;
        // Other slots carry their unit.
        for (std::size_t q = 0; q < space->size(); ++q) {
          if (q == s) continue;
          std::vector<TensorElement::Key> next;
          for (const auto& k : keys)
            for (const auto& u : space->slots[q].unit()) {
              auto nk = k;
              nk[q] = u;
              next.push_back(std::move(nk));
            }
          keys = std::move(next);
        }
        for (const auto& k : keys) factor.add_term(k, phase(e, space->mode));
      }
      if (s == 0) {
        piece = coeff * factor;
      } else {
        piece = tensor_multiply(piece, factor);
      }
    }
    r += piece;
  }
  return r;
}

// Canonical form of an element: re-multiplying by the unit resolves any non-normal keys.
inline TensorElement normal_order(const TensorElement& e) { return tensor_multiply(TensorElement::unit(e.space()), e); }

// Square matrix with tensor-element entries.
class MatrixOverAlgebra {
 public:
  MatrixOverAlgebra(TensorSpacePtr space, std::size_t n) : space_(std::move(space)), n_(n), entries_(n * n, TensorElement(space_)) {}

  std::size_t dim() const { return n_; }
  const TensorSpacePtr& space() const { return space_; }
  TensorElement& operator()(std::size_t r, std::size_t c) { return entries_[r * n_ + c]; }
  const TensorElement& operator()(std::size_t r, std::size_t c) const { return entries_[r * n_ + c]; }

  static MatrixOverAlgebra identity(TensorSpacePtr space, std::size_t n) {
    MatrixOverAlgebra m(space, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = TensorElement::unit(space);
    return m;
  }

 private:
  TensorSpacePtr space_;
  std::size_t n_;
  std::vector<TensorElement> entries_;
};

inline MatrixOverAlgebra matrix_multiply(const MatrixOverAlgebra& a, const MatrixOverAlgebra& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("matrix shape mismatch");
  MatrixOverAlgebra r(a.space(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < a.dim(); ++j)
        if (!b(k, j).is_zero()) r(i, j) += tensor_multiply(a(i, k), b(k, j));
    }
  return r;
}

inline MatrixOverAlgebra matrix_star(const MatrixOverAlgebra& a) {
  MatrixOverAlgebra r(a.space(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r(j, i) = tensor_star(a(i, j));
  return r;
}

// Fundamental matrix: rows and columns indexed by (x, i, j), entry u^{ij}_{kl,xy}.
struct FundamentalIndex {
  int x, i, j;
};

inline std::vector<FundamentalIndex> fundamental_indices(const GradingSpec& spec) {
  std::vector<FundamentalIndex> out;
  for (int x = 0; x < spec.blocks(); ++x)
    for (int i = 0; i < spec.size(x); ++i)
      for (int j = 0; j < spec.size(x); ++j) out.push_back({x, i, j});
  return out;
}

inline MatrixOverAlgebra fundamental_matrix(const PresentationPtr& p) {
  auto space = tensor_power(p, 1);
  const auto idx = fundamental_indices(p->spec);
  MatrixOverAlgebra m(space, idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) {
      const Letter g = p->at(idx[r].i, idx[r].j, idx[c].i, idx[c].j, idx[r].x, idx[c].x);
      m(r, c) = TensorElement::monomial(space, {Word{0, {g}}});
    }
  return m;
}

}  // namespace qaut
