#pragma once

// Symbolic crossed products D x| Z (finitely supported sums of v^r E_{ij,x}), their trace,
// orthogonal filtrations and the lifted action of the bosonised presentation.

#include "qaut/graded_algebra.hpp"
#include "qaut/presentation.hpp"
#include "qaut/tensor.hpp"
#include "qaut/verifier.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qaut {

class CrossedElement {
 public:
  using Key = std::pair<int, int>;  // (v power, basis index)

  CrossedElement() = default;
  explicit CrossedElement(std::shared_ptr<const GradedAlgebra> alg) : alg_(std::move(alg)) {}

  static CrossedElement basis(std::shared_ptr<const GradedAlgebra> alg, int power, int b, const Scalar& c = Scalar(1)) {
    CrossedElement r(std::move(alg));
    r.add_term(power, b, c);
    return r;
  }

  // v^power times the unit.
  static CrossedElement unitary_power(std::shared_ptr<const GradedAlgebra> alg, int power) {
    CrossedElement r(alg);
    for (const auto& w : SlotAlgebra::crossed(alg).unit()) r.add_term(power, w.letters.front(), Scalar(1));
    return r;
  }

  const std::shared_ptr<const GradedAlgebra>& algebra() const { return alg_; }
  const std::map<Key, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Largest |r| ever stored; products raise it rather than truncating.
  int radius() const { return radius_; }

  void add_term(int power, int b, const Scalar& c) {
    radius_ = std::max(radius_, std::abs(power));
    if (c.is_zero()) return;
    Scalar& s = terms_[{power, b}];
    s += c;
    if (s.is_zero()) terms_.erase({power, b});
  }

  Scalar coefficient(int power, int b) const {
    auto it = terms_.find({power, b});
    return it == terms_.end() ? Scalar() : it->second;
  }

  friend CrossedElement operator+(const CrossedElement& a, const CrossedElement& b) {
    CrossedElement r = a;
    r.radius_ = std::max(a.radius_, b.radius_);
    for (const auto& [k, c] : b.terms_) r.add_term(k.first, k.second, c);
    return r;
  }
  friend CrossedElement operator-(const CrossedElement& a, const CrossedElement& b) { return a + Scalar(-1) * b; }
  friend CrossedElement operator*(const Scalar& s, const CrossedElement& a) {
    CrossedElement r(a.alg_);
    r.radius_ = a.radius_;
    for (const auto& [k, c] : a.terms_) r.add_term(k.first, k.second, s * c);
    return r;
  }
  friend CrossedElement operator*(const CrossedElement& a, const CrossedElement& b) {
    const SlotAlgebra slot = SlotAlgebra::crossed(a.alg_);
    CrossedElement r(a.alg_);
    r.radius_ = std::max(a.radius_, b.radius_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        if (auto p = slot.multiply(Word{ka.first, {static_cast<Letter>(ka.second)}}, Word{kb.first, {static_cast<Letter>(kb.second)}}))
          r.add_term(p->word.power, p->word.letters.front(), ca * cb * phase(p->exponent, a.alg_->mode()));
    return r;
  }
  friend bool operator==(const CrossedElement& a, const CrossedElement& b) { return a.terms_ == b.terms_; }

  CrossedElement star() const {
    const SlotAlgebra slot = SlotAlgebra::crossed(alg_);
    CrossedElement r(alg_);
    r.radius_ = radius_;
    for (const auto& [k, c] : terms_) {
      auto p = slot.star(Word{k.first, {static_cast<Letter>(k.second)}});
      r.add_term(p.word.power, p.word.letters.front(), c.star() * phase(p.exponent, alg_->mode()));
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    const SlotAlgebra slot = SlotAlgebra::crossed(alg_);
    std::string out;
    for (const auto& [k, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + c.to_string() + ") " + slot.name(Word{k.first, {static_cast<Letter>(k.second)}});
    }
    return out;
  }

 private:
  std::shared_ptr<const GradedAlgebra> alg_;
  std::map<Key, Scalar> terms_;
  int radius_ = 0;
};

// tau(v^r E_{ij,x}) = delta_{r,0} phi(E_{ij,x}); phi is the algebra's functional
// (per-block 1/n_x when normalized, delta_{ij} otherwise).
inline Scalar crossed_trace(const CrossedElement& a) {
  Scalar acc;
  for (const auto& [k, c] : a.terms())
    if (k.first == 0) acc += a.algebra()->functional_value(k.second) * c;
  return acc;
}

inline std::string normalization_name(FunctionalChoice f) {
  return f == FunctionalChoice::normalized_trace ? "normalized-trace" : "block-delta";
}

struct FiltrationComponent {
  std::string name;
  std::vector<CrossedElement> basis;
};

enum class FiltrationVariant { literal, traceless };

struct Filtration {
  std::shared_ptr<const GradedAlgebra> algebra;
  int radius = 0;
  FiltrationVariant variant = FiltrationVariant::literal;
  std::vector<FiltrationComponent> components;  // components[0] is span{1}

  std::size_t dimension() const {
    std::size_t n = 0;
    for (const auto& c : components) n += c.basis.size();
    return n;
  }
};

// literal: span{v^r 1} for |r| <= R and span{v^s E_{ij,x}} for each i != j, |s| <= R.
// traceless: span{v^s 1} and v^s times the kernel of phi, one component per s.
inline Filtration build_crossed_filtration(const GradingSpec& spec, ZetaMode mode, int radius,
                                           FiltrationVariant variant = FiltrationVariant::literal,
                                           FunctionalChoice functional = FunctionalChoice::normalized_trace) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  Filtration f;
  f.algebra = make_matrix_algebra(spec, functional, mode);
  f.radius = radius;
  f.variant = variant;
  const auto& alg = f.algebra;
  const SlotAlgebra slot = SlotAlgebra::crossed(alg);
  std::vector<int> powers{0};
  for (int r = 1; r <= radius; ++r) {
    powers.push_back(-r);
    powers.push_back(r);
  }
  for (int r : powers) f.components.push_back({slot.name(Word{r, {}}), {CrossedElement::unitary_power(alg, r)}});
  for (int s : powers) {
    if (variant == FiltrationVariant::literal) {
      for (int b = 0; b < alg->dim(); ++b) {
        const BasisIndex& e = alg->basis(b);
        if (e.row == e.col) continue;
        f.components.push_back({slot.name(Word{s, {static_cast<Letter>(b)}}), {CrossedElement::basis(alg, s, b)}});
      }
    } else {
      FiltrationComponent c{slot.name(Word{s, {}}) + ".D0", {}};
      const int first = alg->index(0, 0, 0);
      for (int b = 0; b < alg->dim(); ++b) {
        const BasisIndex& e = alg->basis(b);
        if (e.row != e.col) {
          c.basis.push_back(CrossedElement::basis(alg, s, b));
        } else if (b != first) {
          // E_b - (phi(E_b) / phi(E_first)) E_first
          CrossedElement x = CrossedElement::basis(alg, s, b);
          x.add_term(s, first, -(alg->functional_value(b) / alg->functional_value(first)));
          c.basis.push_back(std::move(x));
        }
      }
      if (!c.basis.empty()) f.components.push_back(std::move(c));
    }
  }
  return f;
}

struct OrthogonalityViolation {
  std::string left, right;  // component names
  std::size_t left_index = 0, right_index = 0;
  Scalar value;
};

struct OrthogonalityReport {
  std::size_t pairs_checked = 0;
  std::vector<OrthogonalityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Evaluates tau(a* b) over every basis pair from distinct components.
inline OrthogonalityReport check_orthogonality(const Filtration& f, unsigned jobs = 1) {
  const std::size_t m = f.components.size();
  std::vector<OrthogonalityReport> per(m);
  parallel_for(m, jobs, [&](std::size_t i) {
    auto& out = per[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const auto& ci = f.components[i];
      const auto& cj = f.components[j];
      for (std::size_t a = 0; a < ci.basis.size(); ++a) {
        const CrossedElement as = ci.basis[a].star();
        for (std::size_t b = 0; b < cj.basis.size(); ++b) {
          ++out.pairs_checked;
          const Scalar v = crossed_trace(as * cj.basis[b]);
          if (!v.is_zero()) out.violations.push_back({ci.name, cj.name, a, b, v});
        }
      }
    }
  });
  OrthogonalityReport r;
  for (auto& p : per) {
    r.pairs_checked += p.pairs_checked;
    for (auto& v : p.violations) r.violations.push_back(std::move(v));
  }
  return r;
}

// Searches basis pairs with |powers| <= radius for tau(ab) != tau(ba).
struct TracePropertyCounterexample {
  CrossedElement a, b;
  Scalar ab, ba;
};

inline std::optional<TracePropertyCounterexample> find_trace_counterexample(const GradingSpec& spec, ZetaMode mode, int radius,
                                                                            FunctionalChoice functional = FunctionalChoice::normalized_trace) {
  const auto alg = make_matrix_algebra(spec, functional, mode);
  std::vector<CrossedElement> basis;
  for (int r = -radius; r <= radius; ++r)
    for (int b = 0; b < alg->dim(); ++b) basis.push_back(CrossedElement::basis(alg, r, b));
  for (const auto& a : basis)
    for (const auto& b : basis) {
      Scalar ab = crossed_trace(a * b);
      Scalar ba = crossed_trace(b * a);
      if (!(ab - ba).is_zero()) return TracePropertyCounterexample{a, b, ab, ba};
    }
  return std::nullopt;
}

inline std::string variant_name(FiltrationVariant v) { return v == FiltrationVariant::literal ? "literal" : "traceless"; }

// Orthogonality sweeps for every radius up to `radius` plus the trace-property search.
inline VerificationReport verify_filtration(const GradingSpec& spec, ZetaMode mode, int radius, FunctionalChoice functional, unsigned jobs = 1) {
  VerificationReport r;
  r.suite = "filtration";
  r.spec = spec.to_string();
  r.zeta = mode.to_string();
  r.notes.push_back("functional " + normalization_name(functional));
  ReportBuilder rb(r);
  for (int rad = 0; rad <= radius; ++rad)
    for (auto v : {FiltrationVariant::literal, FiltrationVariant::traceless}) {
      const Filtration f = build_crossed_filtration(spec, mode, rad, v, functional);
      const OrthogonalityReport o = check_orthogonality(f, jobs);
      std::string detail = std::to_string(f.components.size()) + " components, dimension " + std::to_string(f.dimension()) + ", " +
                           std::to_string(o.pairs_checked) + " pairs, " + std::to_string(o.violations.size()) + " violations";
      if (!o.ok()) detail += "; first " + o.violations.front().left + " vs " + o.violations.front().right;
      rb.syntactic("orthogonality " + variant_name(v) + " R=" + std::to_string(rad), o.ok(), detail);
    }
  const auto ce = find_trace_counterexample(spec, mode, std::min(radius, 2), functional);
  rb.syntactic("tracial tau(ab)=tau(ba) R=" + std::to_string(std::min(radius, 2)), !ce,
               ce ? "counterexample " + ce->a.to_string() + " , " + ce->b.to_string() : "no counterexample");
  return r;
}

// ---------------------------------------------------------------------------
// Lifted action on the crossed product:
// eta~(v^r E_{ij,x}) = sum_{y} sum_{k,l in y} v^r E_{kl,y} (x) z^{r + d^y_k - d^y_l} u^{kl}_{ij,yx}

struct LiftedActionContext {
  PresentationPtr braided;
  PresentationPtr bosonised;
  std::shared_ptr<const GradedAlgebra> algebra;
  TensorSpacePtr hybrid;  // crossed (x) bosonised, ordinary tensor product

  LiftedActionContext(const GradingSpec& spec, ZetaMode mode, FunctionalChoice functional = FunctionalChoice::normalized_trace)
      : braided(gen_braided_aut(spec, mode)),
        bosonised(gen_bosonisation(*braided)),
        algebra(make_matrix_algebra(spec, functional, mode)),
        hybrid(make_space({SlotAlgebra::crossed(algebra), SlotAlgebra::presented(bosonised)}, false)) {}

  TensorElement lift(int power, int b) const {
    const BasisIndex& e = algebra->basis(b);
    const auto& sp = bosonised->spec;
    TensorElement r(hybrid);
    for (int y = 0; y < sp.blocks(); ++y)
      for (int k = 0; k < sp.size(y); ++k)
        for (int l = 0; l < sp.size(y); ++l) {
          const Letter g = bosonised->at(k, l, e.row, e.col, y, e.block);
          r.add_term({Word{power, {static_cast<Letter>(algebra->index(y, k, l))}}, Word{power + sp.degree(y, k) - sp.degree(y, l), {g}}}, Scalar(1));
        }
    return r;
  }

  TensorElement lift(const CrossedElement& a) const {
    TensorElement r(hybrid);
    for (const auto& [k, c] : a.terms()) r += c * lift(k.first, k.second);
    return r;
  }
};

inline VerificationReport verify_lifted_action(const GradingSpec& spec, ZetaMode mode, const SuiteOptions& opt = {},
                                               FunctionalChoice functional = FunctionalChoice::normalized_trace) {
  const LiftedActionContext ctx(spec, mode, functional);
  const auto& p = ctx.bosonised;
  const auto& alg = ctx.algebra;
  VerificationReport r = make_report("lifted-action", *p);
  r.notes.push_back("functional " + normalization_name(functional));
  r.notes.push_back("crossed product rule: v E v* = zeta^{-deg E} E");
  ReportBuilder rb(r);
  const int dim = alg->dim();
  const TensorElement one = TensorElement::unit(ctx.hybrid);
  const CrossedElement v = CrossedElement::unitary_power(alg, 1);
  const CrossedElement vs = v.star();
  const TensorElement lv = ctx.lift(v);
  const TensorElement lvs = ctx.lift(vs);

  std::vector<PendingCheck> batch;
  batch.push_back({"unitary v v*", tensor_multiply(lv, lvs) - one, p, {}, {}});
  batch.push_back({"unitary v* v", tensor_multiply(lvs, lv) - one, p, {}, {}});
  batch.push_back({"star v", tensor_star(lv) - lvs, p, {}, {}});
  for (int b = 0; b < dim; ++b) {
    const TensorElement le = ctx.lift(0, b);
    // v E v* = zeta^{-deg E} E
    TensorElement t = tensor_multiply(tensor_multiply(lv, le), lvs) - phase(-alg->degree(b), mode) * le;
    batch.push_back({"twist " + alg->basis_name(b), std::move(t), p, {}, {}});
    batch.push_back({"star " + alg->basis_name(b), tensor_star(le) - ctx.lift(0, alg->star_index(b)), p, {}, {}});
  }
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      TensorElement t = tensor_multiply(ctx.lift(0, a), ctx.lift(0, b));
      if (auto prod = alg->product(a, b)) t -= ctx.lift(0, *prod);
      batch.push_back({"mult " + alg->basis_name(a) + "." + alg->basis_name(b), std::move(t), p, {}, {}});
    }
  {
    TensorElement t = ctx.lift(CrossedElement::unitary_power(alg, 0)) - one;
    batch.push_back({"unit", std::move(t), p, {}, {}});
  }
  rb.certify(std::move(batch), opt);

  // Comodule law (eta~ (x) id) eta~ = (id (x) Delta) eta~, as formal sums.
  const auto cube = make_space({SlotAlgebra::crossed(alg), SlotAlgebra::presented(p), SlotAlgebra::presented(p)}, false);
  const auto square = tensor_power(p, 2);
  for (int power = -1; power <= 1; ++power)
    for (int b = 0; b < dim; ++b) {
      const TensorElement e = ctx.lift(power, b);
      TensorElement lhs = apply_in_slot(e, 1, cube, [&](const Word& w) { return coproduct_of_word(p, square, w); });
      TensorElement rhs = apply_in_slot(e, 0, cube, [&](const Word& w) { return ctx.lift(w.power, w.letters.front()); });
      rb.syntactic("comodule " + SlotAlgebra::crossed(alg).name(Word{power, {static_cast<Letter>(b)}}), lhs == rhs,
                   std::to_string(lhs.size()) + " terms");
    }

  // Filtration preservation: the v-power is untouched, traces are carried to z^s,
  // and v^s 1 goes to v^s 1 (x) z^s.
  const auto presented1 = tensor_power(p, 1);
  std::vector<PendingCheck> filt;
  const int radius = 1;
  for (int s = -radius; s <= radius; ++s) {
    bool same_power = true;
    for (int b = 0; b < dim; ++b) {
      const TensorElement e = ctx.lift(s, b);
      for (const auto& [k, c] : e.terms()) same_power = same_power && k[0].power == s;
    }
    rb.syntactic("filtration v-power s=" + std::to_string(s), same_power);
    for (int b = 0; b < dim; ++b) {
      TensorElement t(presented1);
      const TensorElement e = ctx.lift(s, b);
      for (const auto& [k, c] : e.terms())
        if (k[0].power == s) {
          const Scalar f = alg->functional_value(k[0].letters.front());
          if (!f.is_zero()) t.add_term({k[1]}, f * c);
        }
      t.add_term({Word{s, {}}}, -alg->functional_value(b));
      const std::string name = SlotAlgebra::crossed(alg).name(Word{s, {static_cast<Letter>(b)}});
      filt.push_back({"filtration trace " + name, std::move(t), p, {phi_family(*p)}, "relations " + phi_family(*p)});
    }
    TensorElement t = ctx.lift(CrossedElement::unitary_power(alg, s));
    for (const auto& uw : SlotAlgebra::crossed(alg).unit()) t.add_term({Word{s, uw.letters}, Word{s, {}}}, Scalar(-1));
    filt.push_back({"filtration unit " + SlotAlgebra::crossed(alg).name(Word{s, {}}), std::move(t), p, {}, {}});
  }
  rb.certify(std::move(filt), opt);

  // r = 0 restriction: eta~(E) is eta(E) with z^{deg E_kl} inserted on the right.
  const auto action_space = make_space({SlotAlgebra::matrix(alg), SlotAlgebra::presented(ctx.braided)}, true);
  for (int b = 0; b < dim; ++b) {
    std::map<std::pair<std::string, std::string>, Scalar> from_eta, from_lift;
    const TensorElement eta = action_of_basis(ctx.braided, *alg, action_space, b);
    for (const auto& [k, c] : eta.terms()) {
      const Word twisted{alg->degree(k[0].letters.front()), k[1].letters};
      from_eta[{alg->basis_name(k[0].letters.front()), p->word_name(twisted)}] += c;
    }
    const TensorElement lifted = ctx.lift(0, b);
    for (const auto& [k, c] : lifted.terms()) from_lift[{alg->basis_name(k[0].letters.front()), p->word_name(k[1])}] += c;
    rb.syntactic("restriction " + alg->basis_name(b), from_eta == from_lift);
  }
  return r;
}

}  // namespace qaut
