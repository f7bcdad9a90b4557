#pragma once

// Generators, words and relation schemas of the braided automorphism algebras,
// their bosonisations and the crossed-product symmetry presentation.

#include "qaut/graded_algebra.hpp"
#include "qaut/scalar.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qaut {

using Letter = std::uint16_t;

// A monomial in one tensor slot: unitary power followed by letters. In concrete
// slots the single letter is a matrix-unit index and `power` is the crossed power.
struct Word {
  int power = 0;
  std::vector<Letter> letters;

  std::size_t length() const { return letters.size(); }
  bool is_unit() const { return power == 0 && letters.empty(); }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.letters.size() <=> b.letters.size(); c != 0) return c;
    if (auto c = std::lexicographical_compare_three_way(a.letters.begin(), a.letters.end(), b.letters.begin(), b.letters.end());
        c != 0)
      return c;
    return a.power <=> b.power;
  }
};

inline Word concat(const Word& a, const Word& b) {
  Word w{a.power + b.power, a.letters};
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

// Sparse element of the free algebra on one slot.
using FreeElement = std::map<Word, Scalar>;

inline void add_to(FreeElement& e, const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = e.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) e.erase(it);
  }
}

enum class PresentationKind { braided, bosonised, qiso };

inline std::string to_string(PresentationKind k) {
  switch (k) {
    case PresentationKind::braided: return "braided";
    case PresentationKind::bosonised: return "bosonised";
    case PresentationKind::qiso: return "qiso";
  }
  return "?";
}

// u^{ij}_{kl,xy}: upper indices i, j in block x, lower indices k, l in block y (all 0-based).
struct Generator {
  int i = 0, j = 0, k = 0, l = 0, x = 0, y = 0;
  int degree = 0;
  Letter star_letter = 0;
  long long star_exponent = 0;  // star(g) = zeta^{star_exponent} * star_letter
};

struct Relation {
  std::string family;
  std::vector<std::string> instances;  // labels of all schema instances merged into this relation
  FreeElement element;                 // understood as "= 0"
};

struct CoproductTerm {
  Scalar coeff;
  Word left;
  Word right;
};

struct PresentationOptions {
  // Evaluate every phase exponent as zero (comparison schema for zeta = 1).
  bool zero_phases = false;
};

class Presentation {
 public:
  PresentationKind kind = PresentationKind::braided;
  // Generator family this presentation came from; used to regenerate it when replaying files.
  std::string schema = "braided-aut";
  ZetaMode mode = ZetaMode::generic();
  GradingSpec spec;
  std::string letter_prefix = "u";
  std::vector<Generator> generators;
  std::vector<Relation> relations;
  std::vector<std::vector<CoproductTerm>> coproduct;  // per generator
  std::map<std::string, std::size_t> raw_instance_counts;

  bool has_unitary() const { return kind != PresentationKind::braided; }
  char unitary_name() const { return kind == PresentationKind::qiso ? 'v' : 'z'; }
  bool braided() const { return kind == PresentationKind::braided; }
  std::size_t letter_count() const { return generators.size(); }
  int total_indices() const { return spec.total(); }

  const Generator& generator(Letter g) const { return generators.at(g); }

  // Generator lookup by 0-based indices.
  std::optional<Letter> find(int i, int j, int k, int l, int x = 0, int y = 0) const {
    const auto key = lookup_key(i, j, k, l, x, y);
    if (!key || *key >= lookup_.size() || lookup_[*key] < 0) return std::nullopt;
    return static_cast<Letter>(lookup_[*key]);
  }
  Letter at(int i, int j, int k, int l, int x = 0, int y = 0) const {
    auto g = find(i, j, k, l, x, y);
    if (!g) throw std::out_of_range("no such generator");
    return *g;
  }
  // 1-based convenience: u(1,2,2,1) or u(1,1,1,1,1,2).
  Letter u(int i, int j, int k, int l, int x = 1, int y = 1) const { return at(i - 1, j - 1, k - 1, l - 1, x - 1, y - 1); }

  std::string letter_name(Letter g) const {
    const auto& q = generators.at(g);
    std::string s = letter_prefix + "(" + std::to_string(q.i + 1) + "," + std::to_string(q.j + 1) + "," + std::to_string(q.k + 1) + "," +
                    std::to_string(q.l + 1);
    if (spec.blocks() > 1) s += ";" + std::to_string(q.x + 1) + "," + std::to_string(q.y + 1);
    return s + ")";
  }

  std::optional<Letter> parse_letter(const std::string& name) const {
    if (auto it = names_.find(name); it != names_.end()) return it->second;
    return std::nullopt;
  }

  int word_degree(const Word& w) const {
    int d = 0;
    for (Letter g : w.letters) d += generators[g].degree;
    return d;
  }

  std::string word_name(const Word& w) const {
    std::string out;
    if (w.power != 0) {
      out += unitary_name();
      if (w.power != 1) out += "^" + std::to_string(w.power);
    }
    for (Letter g : w.letters) {
      if (!out.empty()) out += ".";
      out += letter_name(g);
    }
    return out.empty() ? "1" : out;
  }

  // Torus weight of a letter: (e_i - e_j, e_k - e_l) over global indices.
  const std::vector<int>& letter_weight(Letter g) const { return weights_.at(g); }

  // Must be called once generators are filled in.
  void index_generators() {
    std::size_t nmax = 0;
    for (const auto& b : spec.degrees()) nmax = std::max(nmax, b.size());
    nmax_ = static_cast<int>(nmax);
    lookup_.assign(static_cast<std::size_t>(spec.blocks() * spec.blocks()) * nmax * nmax * nmax * nmax, -1);
    names_.clear();
    weights_.clear();
    const int t = spec.total();
    for (std::size_t g = 0; g < generators.size(); ++g) {
      const auto& q = generators[g];
      lookup_[*lookup_key(q.i, q.j, q.k, q.l, q.x, q.y)] = static_cast<int>(g);
      names_[letter_name(static_cast<Letter>(g))] = static_cast<Letter>(g);
      std::vector<int> w(static_cast<std::size_t>(2 * t), 0);
      w[static_cast<std::size_t>(spec.offset(q.x) + q.i)] += 1;
      w[static_cast<std::size_t>(spec.offset(q.x) + q.j)] -= 1;
      w[static_cast<std::size_t>(t + spec.offset(q.y) + q.k)] += 1;
      w[static_cast<std::size_t>(t + spec.offset(q.y) + q.l)] -= 1;
      weights_.push_back(std::move(w));
    }
  }

  std::string dump() const;

 private:
  std::optional<std::size_t> lookup_key(int i, int j, int k, int l, int x, int y) const {
    const int m = spec.blocks();
    if (x < 0 || y < 0 || x >= m || y >= m) return std::nullopt;
    if (i < 0 || j < 0 || i >= spec.size(x) || j >= spec.size(x)) return std::nullopt;
    if (k < 0 || l < 0 || k >= spec.size(y) || l >= spec.size(y)) return std::nullopt;
    const std::size_t n = static_cast<std::size_t>(nmax_);
    return ((((static_cast<std::size_t>(x) * static_cast<std::size_t>(m) + static_cast<std::size_t>(y)) * n + static_cast<std::size_t>(i)) * n +
             static_cast<std::size_t>(j)) * n + static_cast<std::size_t>(k)) * n + static_cast<std::size_t>(l);
  }

  int nmax_ = 0;
  std::vector<int> lookup_;
  std::map<std::string, Letter> names_;
  std::vector<std::vector<int>> weights_;
};

using PresentationPtr = std::shared_ptr<const Presentation>;

// Text of a one-slot element: "(c1) w1 + (c2) w2".
inline std::string element_text(const FreeElement& e, const std::function<std::string(const Word&)>& name) {
  if (e.empty()) return "0";
  std::string out;
  for (const auto& [w, c] : e) {
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ") " + name(w);
  }
  return out;
}

namespace detail {

// Scale so that the least word has coefficient 1.
inline FreeElement normalize_relation(const FreeElement& e) {
  if (e.empty()) return e;
  const Scalar inv = e.begin()->second.inverse();
  FreeElement r;
  for (const auto& [w, c] : e) r.emplace(w, c * inv);
  return r;
}

class RelationCollector {
 public:
  explicit RelationCollector(Presentation& p) : p_(p) {}

  void add(const std::string& family, const std::string& label, const FreeElement& e) {
    ++p_.raw_instance_counts[family];
    if (e.empty()) return;
    FreeElement norm = normalize_relation(e);
    std::string key = element_text(norm, [&](const Word& w) { return p_.word_name(w); });
    if (auto it = seen_.find(key); it != seen_.end()) {
      p_.relations[it->second].instances.push_back(label);
      return;
    }
    seen_[key] = p_.relations.size();
    p_.relations.push_back(Relation{family, {label}, std::move(norm)});
  }

 private:
  Presentation& p_;
  std::map<std::string, std::size_t> seen_;
};

inline std::string label(const std::string& family, std::initializer_list<int> idx) {
  std::string s = family + "(";
  bool first = true;
  for (int v : idx) {
    if (!first) s += ",";
    s += std::to_string(v + 1);
    first = false;
  }
  return s + ")";
}

inline Word word_of(std::initializer_list<Letter> ls) { return Word{0, std::vector<Letter>(ls)}; }

inline void fill_generators(Presentation& p) {
  const GradingSpec& s = p.spec;
  for (int x = 0; x < s.blocks(); ++x)
    for (int y = 0; y < s.blocks(); ++y)
      for (int i = 0; i < s.size(x); ++i)
        for (int j = 0; j < s.size(x); ++j)
          for (int k = 0; k < s.size(y); ++k)
            for (int l = 0; l < s.size(y); ++l) {
              Generator g{i, j, k, l, x, y, 0, 0, 0};
              g.degree = s.degree(y, k) - s.degree(x, i) + s.degree(x, j) - s.degree(y, l);
              p.generators.push_back(g);
            }
  if (p.generators.size() > 0xFFFF) throw SpecError("too many generators");
  p.index_generators();
}

inline void install_braided_coproduct(Presentation& p) {
  const GradingSpec& s = p.spec;
  p.coproduct.assign(p.generators.size(), {});
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    const auto& q = p.generators[g];
    for (int w = 0; w < s.blocks(); ++w)
      for (int r = 0; r < s.size(w); ++r)
        for (int t = 0; t < s.size(w); ++t) {
          const Letter a = p.at(q.i, q.j, r, t, q.x, w);
          const Letter b = p.at(r, t, q.k, q.l, w, q.y);
          p.coproduct[g].push_back({Scalar(1), word_of({a}), word_of({b})});
        }
  }
}

// Relations for a single matrix block.
inline void single_block_relations(Presentation& p, const PresentationOptions& opt) {
  const auto& d = p.spec.degrees()[0];
  const int n = static_cast<int>(d.size());
  const ZetaMode mode = p.mode;
  auto deg = [&](int i, int j, int k, int l) { return d[static_cast<std::size_t>(k)] - d[static_cast<std::size_t>(i)] + d[static_cast<std::size_t>(j)] - d[static_cast<std::size_t>(l)]; };
  auto dd = [&](int i) { return static_cast<long long>(d[static_cast<std::size_t>(i)]); };
  auto ph = [&](long long e) { return phase(opt.zero_phases ? 0 : e, mode); };
  auto U = [&](int i, int j, int k, int l) { return p.at(i, j, k, l); };
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    auto& q = p.generators[g];
    q.star_letter = U(q.j, q.i, q.l, q.k);
    q.star_exponent = opt.zero_phases ? 0 : (dd(q.i) - dd(q.j)) * (dd(q.l) - dd(q.j) + dd(q.i) - dd(q.k));
  }
  RelationCollector rc(p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s)
            for (int m = 0; m < n; ++m) {
              FreeElement e;
              for (int t = 0; t < n; ++t)
                add_to(e, word_of({U(i, t, k, s), U(t, j, m, l)}), ph(dd(t) * deg(i, t, k, s) + dd(j) * deg(t, j, m, l)));
              if (s == m) add_to(e, word_of({U(i, j, k, l)}), -ph(dd(j) * deg(i, j, k, l)));
              rc.add("cond2", label("cond2", {i, j, k, l, s, m}), e);
            }
  // The first factor is twisted by d_m; this agrees with the d_s form whenever s = m.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s)
            for (int m = 0; m < n; ++m) {
              FreeElement e;
              for (int t = 0; t < n; ++t)
                add_to(e, word_of({U(i, s, k, t), U(m, j, t, l)}), ph(dd(m) * deg(i, s, k, t) + dd(j) * deg(m, j, t, l)));
              if (s == m) add_to(e, word_of({U(i, j, k, l)}), -ph(dd(j) * deg(i, j, k, l)));
              rc.add("cond3", label("cond3", {i, j, k, l, s, m}), e);
            }
  p.raw_instance_counts["cond4"] = static_cast<std::size_t>(n * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FreeElement e;
      for (int r = 0; r < n; ++r) add_to(e, word_of({U(i, j, r, r)}), Scalar(1));
      if (i == j) add_to(e, Word{}, Scalar(-1));
      rc.add("cond5", label("cond5", {i, j}), e);
    }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      FreeElement e;
      for (int r = 0; r < n; ++r) add_to(e, word_of({U(r, r, k, l)}), Scalar(1));
      if (k == l) add_to(e, Word{}, Scalar(-1));
      rc.add("cond6", label("cond6", {k, l}), e);
    }
}

// Relations for a direct sum of matrix blocks.
inline void direct_sum_relations(Presentation& p, const PresentationOptions& opt) {
  const GradingSpec& sp = p.spec;
  const int mb = sp.blocks();
  const ZetaMode mode = p.mode;
  auto D = [&](int x, int i) { return static_cast<long long>(sp.degree(x, i)); };
  auto deg = [&](int i, int j, int k, int l, int x, int y) { return D(y, k) - D(x, i) + D(x, j) - D(y, l); };
  auto ph = [&](long long e) { return phase(opt.zero_phases ? 0 : e, mode); };
  auto U = [&](int i, int j, int k, int l, int x, int y) { return p.at(i, j, k, l, x, y); };
  for (auto& q : p.generators) {
    q.star_letter = U(q.j, q.i, q.l, q.k, q.x, q.y);
    q.star_exponent = opt.zero_phases ? 0 : (D(q.x, q.i) - D(q.x, q.j)) * (D(q.y, q.l) - D(q.x, q.j) + D(q.x, q.i) - D(q.y, q.k));
  }
  RelationCollector rc(p);
  for (int x = 0; x < mb; ++x)
    for (int y = 0; y < mb; ++y)
      for (int w = 0; w < mb; ++w)
        for (int i = 0; i < sp.size(x); ++i)
          for (int j = 0; j < sp.size(x); ++j)
            for (int k = 0; k < sp.size(y); ++k)
              for (int s = 0; s < sp.size(y); ++s)
                for (int m = 0; m < sp.size(w); ++m)
                  for (int l = 0; l < sp.size(w); ++l) {
                    FreeElement e;
                    for (int t = 0; t < sp.size(x); ++t)
                      add_to(e, word_of({U(i, t, k, s, x, y), U(t, j, m, l, x, w)}),
                             ph(D(x, t) * deg(i, t, k, s, x, y) + D(x, j) * deg(t, j, m, l, x, w)));
                    if (y == w && s == m) add_to(e, word_of({U(i, j, k, l, x, y)}), -ph(D(x, j) * deg(i, j, k, l, x, y)));
                    rc.add("dirsum1", label("dirsum1", {i, j, k, l, s, m, x, y, w}), e);
                  }
  for (int x = 0; x < mb; ++x)
    for (int y = 0; y < mb; ++y)
      for (int w = 0; w < mb; ++w)
        for (int i = 0; i < sp.size(y); ++i)
          for (int s = 0; s < sp.size(y); ++s)
            for (int m = 0; m < sp.size(w); ++m)
              for (int j = 0; j < sp.size(w); ++j)
                for (int k = 0; k < sp.size(x); ++k)
                  for (int l = 0; l < sp.size(x); ++l) {
                    FreeElement e;
                    for (int t = 0; t < sp.size(x); ++t)
                      add_to(e, word_of({U(i, s, k, t, y, x), U(m, j, t, l, w, x)}),
                             ph(D(w, m) * deg(i, s, k, t, y, x) + D(w, j) * deg(m, j, t, l, w, x)));
                    if (y == w && s == m) add_to(e, word_of({U(i, j, k, l, y, x)}), -ph(D(y, j) * deg(i, j, k, l, y, x)));
                    rc.add("dirsum2", label("dirsum2", {i, j, k, l, s, m, x, y, w}), e);
                  }
  p.raw_instance_counts["dirsum3"] = p.generators.size();
  for (int x = 0; x < mb; ++x)
    for (int i = 0; i < sp.size(x); ++i)
      for (int j = 0; j < sp.size(x); ++j) {
        FreeElement e;
        for (int y = 0; y < mb; ++y)
          for (int r = 0; r < sp.size(y); ++r) add_to(e, word_of({U(i, j, r, r, x, y)}), Scalar(1));
        if (i == j) add_to(e, Word{}, Scalar(-1));
        rc.add("dirsum4", label("dirsum4", {i, j, x}), e);
      }
  for (int y = 0; y < mb; ++y)
    for (int k = 0; k < sp.size(y); ++k)
      for (int l = 0; l < sp.size(y); ++l) {
        FreeElement e;
        for (int x = 0; x < mb; ++x)
          for (int r = 0; r < sp.size(x); ++r) add_to(e, word_of({U(r, r, k, l, x, y)}), Scalar(1));
        if (k == l) add_to(e, Word{}, Scalar(-1));
        rc.add("dirsum5", label("dirsum5", {k, l, y}), e);
      }
}

// Wang's quantum automorphism relations of M_n with the trace, written without phases.
inline void wang_relations(Presentation& p) {
  const int n = p.spec.size(0);
  auto U = [&](int i, int j, int k, int l) { return p.at(i, j, k, l); };
  for (auto& q : p.generators) {
    q.star_letter = U(q.j, q.i, q.l, q.k);
    q.star_exponent = 0;
  }
  RelationCollector rc(p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s)
            for (int m = 0; m < n; ++m) {
              FreeElement e;
              for (int t = 0; t < n; ++t) add_to(e, word_of({U(i, t, k, s), U(t, j, m, l)}), Scalar(1));
              if (s == m) add_to(e, word_of({U(i, j, k, l)}), Scalar(-1));
              rc.add("wang-mult", label("wang-mult", {i, j, k, l, s, m}), e);
            }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s)
            for (int m = 0; m < n; ++m) {
              FreeElement e;
              for (int t = 0; t < n; ++t) add_to(e, word_of({U(i, s, k, t), U(m, j, t, l)}), Scalar(1));
              if (s == m) add_to(e, word_of({U(i, j, k, l)}), Scalar(-1));
              rc.add("wang-antimult", label("wang-antimult", {i, j, k, l, s, m}), e);
            }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FreeElement e;
      for (int r = 0; r < n; ++r) add_to(e, word_of({U(i, j, r, r)}), Scalar(1));
      if (i == j) add_to(e, Word{}, Scalar(-1));
      rc.add("wang-unit", label("wang-unit", {i, j}), e);
    }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      FreeElement e;
      for (int r = 0; r < n; ++r) add_to(e, word_of({U(r, r, k, l)}), Scalar(1));
      if (k == l) add_to(e, Word{}, Scalar(-1));
      rc.add("wang-trace", label("wang-trace", {k, l}), e);
    }
}

inline Presentation base_presentation(const GradingSpec& spec, ZetaMode mode) {
  if (spec.blocks() == 0) throw SpecError("grading spec has no blocks");
  Presentation p;
  p.spec = spec;
  p.mode = mode;
  fill_generators(p);
  return p;
}

}  // namespace detail

// Single-block relations; exposed separately so they can be compared with the direct-sum family.
inline PresentationPtr gen_braided_aut_single_block(const GradingSpec& spec, ZetaMode mode, PresentationOptions opt = {}) {
  if (spec.blocks() != 1) throw SpecError("single-block schema needs exactly one block");
  Presentation p = detail::base_presentation(spec, mode);
  if (opt.zero_phases) p.schema = "braided-aut-zero-phase";
  detail::single_block_relations(p, opt);
  detail::install_braided_coproduct(p);
  return std::make_shared<const Presentation>(std::move(p));
}

inline PresentationPtr gen_braided_aut_direct_sum(const GradingSpec& spec, ZetaMode mode, PresentationOptions opt = {}) {
  Presentation p = detail::base_presentation(spec, mode);
  if (opt.zero_phases) p.schema = "braided-aut-zero-phase";
  detail::direct_sum_relations(p, opt);
  detail::install_braided_coproduct(p);
  return std::make_shared<const Presentation>(std::move(p));
}

inline PresentationPtr gen_braided_aut(const GradingSpec& spec, ZetaMode mode, PresentationOptions opt = {}) {
  return spec.blocks() == 1 ? gen_braided_aut_single_block(spec, mode, opt) : gen_braided_aut_direct_sum(spec, mode, opt);
}

// Wang's phase-free schema on n x n matrix units (all degrees treated as zero).
inline PresentationPtr gen_wang(int n, ZetaMode mode) {
  Presentation p = detail::base_presentation(GradingSpec::single(std::vector<int>(static_cast<std::size_t>(n), 0)), mode);
  p.schema = "wang";
  detail::wang_relations(p);
  detail::install_braided_coproduct(p);
  return std::make_shared<const Presentation>(std::move(p));
}

// Adds the unitary z with z g z* = zeta^{-deg g} g and the twisted coproduct
// Delta(u^{ij}_{kl}) = sum u^{ij}_{rs} (x) z^{deg u^{ij}_{rs}} u^{rs}_{kl}.
inline PresentationPtr gen_bosonisation(const Presentation& braided) {
  if (braided.kind != PresentationKind::braided) throw std::invalid_argument("bosonisation needs a braided presentation");
  Presentation p = braided;
  p.kind = PresentationKind::bosonised;
  p.schema = "bosonised";
  for (auto& terms : p.coproduct)
    for (auto& t : terms) t.right.power = p.word_degree(t.left);
  return std::make_shared<const Presentation>(std::move(p));
}

// Unitary v and q^{ij}_{kl} with Wang's relations, v q v* = zeta^{-deg q} q and the plain coproduct.
inline PresentationPtr gen_qiso_crossed(const GradingSpec& spec, ZetaMode mode) {
  if (spec.blocks() != 1) throw SpecError("the crossed-product symmetry presentation is defined for a single block");
  Presentation p = detail::base_presentation(spec, mode);
  p.kind = PresentationKind::qiso;
  p.letter_prefix = "q";
  p.schema = "qiso";
  p.index_generators();
  detail::wang_relations(p);
  detail::install_braided_coproduct(p);
  return std::make_shared<const Presentation>(std::move(p));
}

inline std::string Presentation::dump() const {
  std::ostringstream os;
  os << "kind " << to_string(kind) << "\n";
  os << "schema " << schema << "\n";
  os << "zeta " << mode.to_string() << "\n";
  os << "spec " << spec.to_string() << "\n";
  if (spec.was_reordered()) {
    os << "degree-permutation";
    for (const auto& b : spec.permutation()) {
      os << " [";
      for (std::size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i] + 1;
      os << "]";
    }
    os << "\n";
  }
  if (has_unitary()) os << "unitary " << unitary_name() << "\n";
  os << "generators " << generators.size() << "\n";
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto& q = generators[g];
    os << "gen " << letter_name(static_cast<Letter>(g)) << " degree " << q.degree << " star (" << phase(q.star_exponent, mode).to_string()
       << ") " << letter_name(q.star_letter) << "\n";
  }
  if (has_unitary()) os << "commute " << unitary_name() << " g " << unitary_name() << "* = (zeta^-deg g) g\n";
  os << "relations " << relations.size() << "\n";
  auto name = [&](const Word& w) { return word_name(w); };
  for (std::size_t r = 0; r < relations.size(); ++r) {
    const auto& rel = relations[r];
    os << "rel " << r + 1 << " " << rel.instances.front();
    if (rel.instances.size() > 1) os << " merged " << rel.instances.size();
    os << " : " << element_text(rel.element, name) << "\n";
  }
  os << "coproduct " << coproduct.size() << "\n";
  for (std::size_t g = 0; g < coproduct.size(); ++g) {
    os << "delta " << letter_name(static_cast<Letter>(g)) << " :";
    bool first = true;
    for (const auto& t : coproduct[g]) {
      os << (first ? " " : " + ") << "(" << t.coeff.to_string() << ") " << word_name(t.left) << " @ " << word_name(t.right);
      first = false;
    }
    os << "\n";
  }
  if (has_unitary()) os << "delta " << unitary_name() << " : (1) " << unitary_name() << " @ " << unitary_name() << "\n";
  return os.str();
}

// Relation elements as canonical text, for set comparisons.
inline std::vector<std::string> relation_texts(const Presentation& p) {
  std::vector<std::string> out;
  for (const auto& r : p.relations) out.push_back(element_text(r.element, [&](const Word& w) { return p.word_name(w); }));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qaut

namespace qaut {

// Rebuilds a presentation from its schema tag, e.g. when replaying a certificate file.
inline PresentationPtr regenerate_presentation(const std::string& schema, const GradingSpec& spec, ZetaMode mode) {
  if (schema == "braided-aut") return gen_braided_aut(spec, mode);
  if (schema == "braided-aut-zero-phase") return gen_braided_aut(spec, mode, PresentationOptions{true});
  if (schema == "bosonised") return gen_bosonisation(*gen_braided_aut(spec, mode));
  if (schema == "qiso") return gen_qiso_crossed(spec, mode);
  if (schema == "wang") {
    if (spec.blocks() != 1) throw SpecError("wang schema needs one block");
    return gen_wang(spec.size(0), mode);
  }
  throw SpecError("unknown presentation schema: " + schema);
}

// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

inline std::string presentation_hash(const Presentation& p) { return hex64(fnv1a64(p.dump())); }

}  // namespace qaut
