#pragma once

// Verification suites: each check is either a certified ideal membership (replayed before it
// is recorded) or a syntactic comparison.

#include "qaut/certificate.hpp"
#include "qaut/graded_algebra.hpp"
#include "qaut/presentation.hpp"
#include "qaut/reduction.hpp"
#include "qaut/tensor.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace qaut {

enum class CheckStatus { certified, passed, inconclusive, violated };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::certified: return "certified";
    case CheckStatus::passed: return "passed";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::violated: return "violated";
  }
  return "?";
}

struct CheckRecord {
  std::string id;
  CheckStatus status = CheckStatus::passed;
  int cap = -1;  // cap that certified, or the cap exhausted when inconclusive
  std::size_t terms = 0;
  std::optional<std::size_t> certificate{};  // index into the suite's certificate bundle
  std::string detail{};
};

struct VerificationReport {
  std::string suite;
  std::string presentation;  // schema tag, empty when the suite has no single presentation
  std::string spec;
  std::string zeta;
  std::vector<std::string> notes;
  std::vector<CheckRecord> checks;
  // Certificates grouped by the presentation and tensor space they live in.
  std::vector<CertificateBundle> bundles;
  std::vector<std::pair<std::size_t, std::size_t>> certificate_refs;  // per certificate: (bundle, index)
  double seconds = 0;

  std::size_t count(CheckStatus s) const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](const CheckRecord& c) { return c.status == s; }));
  }
  bool ok() const { return count(CheckStatus::inconclusive) == 0 && count(CheckStatus::violated) == 0; }
  bool any_violated() const { return count(CheckStatus::violated) > 0; }

  std::string certificate_file() const { return suite + ".certs"; }

  // Certificate reference "<file>#<bundle>.<index>".
  std::string reference(std::size_t cert) const {
    const auto& [b, i] = certificate_refs.at(cert);
    return certificate_file() + "#" + std::to_string(b + 1) + "." + std::to_string(i + 1);
  }

  std::string text() const {
    std::ostringstream os;
    os << "suite " << suite << "\n";
    if (!presentation.empty()) os << "presentation " << presentation << "\n";
    os << "spec " << spec << "\n";
    os << "zeta " << zeta << "\n";
    for (const auto& n : notes) os << "note " << n << "\n";
    for (const auto& c : checks) {
      os << "check " << c.id << " " << to_string(c.status);
      if (c.cap >= 0) os << " cap " << c.cap;
      if (c.status == CheckStatus::certified) os << " terms " << c.terms;
      if (c.certificate) os << " cert " << reference(*c.certificate);
      if (!c.detail.empty()) os << " : " << c.detail;
      os << "\n";
    }
    os << "summary certified " << count(CheckStatus::certified) << " passed " << count(CheckStatus::passed) << " inconclusive "
       << count(CheckStatus::inconclusive) << " violated " << count(CheckStatus::violated) << "\n";
    return os.str();
  }

  nlohmann::ordered_json machine() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["presentation"] = presentation;
    j["spec"] = spec;
    j["zeta"] = zeta;
    j["notes"] = notes;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      nlohmann::ordered_json e;
      e["id"] = c.id;
      e["status"] = to_string(c.status);
      if (c.cap >= 0) e["cap"] = c.cap;
      if (c.status == CheckStatus::certified) e["terms"] = c.terms;
      if (c.certificate) e["certificate"] = reference(*c.certificate);
      if (!c.detail.empty()) e["detail"] = c.detail;
      arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    j["summary"] = {{"certified", count(CheckStatus::certified)},
                    {"passed", count(CheckStatus::passed)},
                    {"inconclusive", count(CheckStatus::inconclusive)},
                    {"violated", count(CheckStatus::violated)}};
    return j;
  }

  std::string certificates_text() const {
    std::string out;
    for (const auto& b : bundles) out += bundle_to_text(b);
    return out;
  }
};

struct SuiteOptions {
  int cap = 3;
  unsigned jobs = 1;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads; results are consumed in index order by the caller.
inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

// A batch of certification targets evaluated in parallel and recorded in order.
struct PendingCheck {
  std::string id;
  TensorElement target;
  PresentationPtr presentation;
  std::set<std::string> families;
  std::string detail{};
};

class ReportBuilder {
 public:
  explicit ReportBuilder(VerificationReport& r) : r_(r), start_(std::chrono::steady_clock::now()) {}
  ~ReportBuilder() { r_.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

  void syntactic(const std::string& id, bool ok, const std::string& detail = {}) {
    r_.checks.push_back({id, ok ? CheckStatus::passed : CheckStatus::violated, -1, 0, std::nullopt, detail});
  }

  void certify(std::vector<PendingCheck> batch, const SuiteOptions& opt) {
    std::vector<std::optional<CertifyResult>> results(batch.size());
    parallel_for(batch.size(), opt.jobs, [&](std::size_t i) {
      CertifyOptions co;
      co.cap = std::max(opt.cap, static_cast<int>(max_presented_length(batch[i].target)));
      co.families = batch[i].families;
      results[i] = certify_zero(batch[i].target, batch[i].presentation, co);
    });
    for (std::size_t i = 0; i < batch.size(); ++i) record(batch[i], *results[i]);
  }

 private:
  void record(const PendingCheck& pc, const CertifyResult& res) {
    CheckRecord rec{pc.id, CheckStatus::inconclusive, -1, 0, std::nullopt, pc.detail};
    if (const auto* cert = std::get_if<Certificate>(&res)) {
      rec.cap = cert->cap;
      rec.terms = cert->terms.size();
      if (!replay(*cert)) {
        // A certificate that does not replay is an engine fault, never a verdict.
        rec.status = CheckStatus::violated;
        rec.detail = "certificate replay failed";
      } else {
        rec.status = CheckStatus::certified;
        rec.certificate = store(pc.id, *cert);
      }
    } else {
      rec.cap = std::get<Inconclusive>(res).cap;
    }
    r_.checks.push_back(std::move(rec));
  }

  std::size_t store(const std::string& id, const Certificate& c) {
    std::size_t b = 0;
    for (; b < r_.bundles.size(); ++b)
      if (r_.bundles[b].presentation == c.presentation && r_.bundles[b].space->descriptor() == c.target.space()->descriptor()) break;
    if (b == r_.bundles.size()) r_.bundles.push_back({c.presentation, c.target.space(), {}});
    r_.bundles[b].certificates.push_back({id, c});
    r_.certificate_refs.emplace_back(b, r_.bundles[b].certificates.size() - 1);
    return r_.certificate_refs.size() - 1;
  }

  VerificationReport& r_;
  std::chrono::steady_clock::time_point start_;
};

inline VerificationReport make_report(const std::string& suite, const Presentation& p) {
  VerificationReport r;
  r.suite = suite;
  r.presentation = p.schema;
  r.spec = p.spec.to_string();
  r.zeta = p.mode.to_string();
  return r;
}

// Appends another report's checks and certificates, prefixing check ids.
inline void absorb(VerificationReport& dst, VerificationReport src, const std::string& prefix) {
  const std::size_t bundle_offset = dst.bundles.size();
  const std::size_t ref_offset = dst.certificate_refs.size();
  for (auto& b : src.bundles) dst.bundles.push_back(std::move(b));
  for (const auto& [b, i] : src.certificate_refs) dst.certificate_refs.emplace_back(b + bundle_offset, i);
  for (const auto& n : src.notes) dst.notes.push_back(prefix + n);
  for (auto& ch : src.checks) {
    ch.id = prefix + ch.id;
    if (ch.certificate) *ch.certificate += ref_offset;
    dst.checks.push_back(std::move(ch));
  }
  dst.seconds += src.seconds;
}

// ---------------------------------------------------------------------------
// Coproducts

// Delta of a single generator as an element of the tensor square.
inline TensorElement coproduct_of_letter(const PresentationPtr& p, const TensorSpacePtr& square, Letter g) {
  TensorElement r(square);
  for (const auto& t : p->coproduct.at(g)) r.add_term({t.left, t.right}, t.coeff);
  return r;
}

// Delta of a word: Delta(z^k) = z^k (x) z^k and Delta is multiplicative.
inline TensorElement coproduct_of_word(const PresentationPtr& p, const TensorSpacePtr& square, const Word& w) {
  TensorElement acc = TensorElement::monomial(square, {Word{w.power, {}}, Word{w.power, {}}});
  for (Letter g : w.letters) acc = tensor_multiply(acc, coproduct_of_letter(p, square, g));
  return acc;
}

inline TensorElement coproduct(const PresentationPtr& p, const TensorSpacePtr& square, const FreeElement& e) {
  TensorElement r(square);
  for (const auto& [w, c] : e) r += c * coproduct_of_word(p, square, w);
  return r;
}

inline TensorElement single_slot(const TensorSpacePtr& space, const FreeElement& e) {
  TensorElement r(space);
  for (const auto& [w, c] : e) r.add_term({w}, c);
  return r;
}

// Applies a map Word -> element of a k-slot space to one slot of every term.
inline TensorElement apply_in_slot(const TensorElement& e, std::size_t slot, const TensorSpacePtr& target,
                                   const std::function<TensorElement(const Word&)>& map) {
  TensorElement r(target);
  for (const auto& [k, c] : e.terms()) splice_into(r, k, slot, map(k[slot]), c);
  return r;
}

// ---------------------------------------------------------------------------
// Unitarity of the fundamental matrix

inline std::string fundamental_label(const GradingSpec& spec, const FundamentalIndex& a) {
  std::string s = "(" + std::to_string(a.i + 1) + "," + std::to_string(a.j + 1);
  if (spec.blocks() > 1) s += ";" + std::to_string(a.x + 1);
  return s + ")";
}

inline VerificationReport verify_unitarity(const PresentationPtr& p, const SuiteOptions& opt = {}) {
  VerificationReport r = make_report("unitarity", *p);
  {
    ReportBuilder rb(r);
    const MatrixOverAlgebra u = fundamental_matrix(p);
    const MatrixOverAlgebra us = matrix_star(u);
    const auto idx = fundamental_indices(p->spec);
    const TensorElement one = TensorElement::unit(u.space());
    for (const auto& [name, m] : {std::make_pair(std::string("u*u"), matrix_multiply(us, u)), std::make_pair(std::string("uu*"), matrix_multiply(u, us))}) {
      std::vector<PendingCheck> batch;
      for (std::size_t a = 0; a < m.dim(); ++a)
        for (std::size_t b = 0; b < m.dim(); ++b) {
          TensorElement t = a == b ? m(a, b) - one : m(a, b);
          batch.push_back({name + fundamental_label(p->spec, idx[a]) + fundamental_label(p->spec, idx[b]), std::move(t), p, {}, {}});
        }
      rb.certify(std::move(batch), opt);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Comultiplication respects the relations

inline VerificationReport verify_comult_welldefined(const PresentationPtr& p, const SuiteOptions& opt = {}) {
  VerificationReport r = make_report("comult", *p);
  r.notes.push_back("degree convention: deg u(i,j,k,l) = d_k - d_i + d_j - d_l; the ordering d_i - d_j + d_k - d_l is not used");
  {
    ReportBuilder rb(r);
    const auto square = tensor_power(p, 2);
    for (Letter g = 0; g < p->letter_count(); ++g) {
      bool ok = true;
      for (const auto& t : p->coproduct[g]) ok = ok && p->word_degree(t.left) + p->word_degree(t.right) == p->generator(g).degree;
      rb.syntactic("degree " + p->letter_name(g), ok, "deg " + std::to_string(p->generator(g).degree));
    }
    std::vector<PendingCheck> batch;
    for (std::size_t i = 0; i < p->relations.size(); ++i) {
      const Relation& rel = p->relations[i];
      std::string detail = "rel " + std::to_string(i + 1);
      if (rel.instances.size() > 1) detail += " covers " + std::to_string(rel.instances.size()) + " instances";
      batch.push_back({"delta " + rel.instances.front(), coproduct(p, square, rel.element), p, {}, detail});
    }
    // Delta commutes with the star rules: Delta(g)* = zeta^e Delta(g*).
    for (Letter g = 0; g < p->letter_count(); ++g) {
      const auto& gen = p->generator(g);
      TensorElement lhs = tensor_star(coproduct_of_letter(p, square, g));
      TensorElement rhs = phase(gen.star_exponent, p->mode) * coproduct_of_letter(p, square, gen.star_letter);
      batch.push_back({"star " + p->letter_name(g), lhs - rhs, p, {}, {}});
    }
    rb.certify(std::move(batch), opt);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Coassociativity, as a formal identity in the tensor cube

inline VerificationReport verify_coassociativity(const PresentationPtr& p) {
  VerificationReport r = make_report("coassoc", *p);
  ReportBuilder rb(r);
  const auto square = tensor_power(p, 2);
  const auto cube = tensor_power(p, 3);
  auto delta = [&](const Word& w) { return coproduct_of_word(p, square, w); };
  auto check = [&](const std::string& id, const TensorElement& d) {
    TensorElement lhs = apply_in_slot(d, 0, cube, delta);
    TensorElement rhs = apply_in_slot(d, 1, cube, delta);
    rb.syntactic(id, lhs == rhs, std::to_string(lhs.size()) + " terms");
  };
  for (Letter g = 0; g < p->letter_count(); ++g) check(p->letter_name(g), coproduct_of_letter(p, square, g));
  if (p->has_unitary()) check(std::string(1, p->unitary_name()), coproduct_of_word(p, square, Word{1, {}}));
  return r;
}

// ---------------------------------------------------------------------------
// The action on the graded matrix algebra

// eta(E_{ij,x}) = sum_y sum_{r,s in y} E_{rs,y} (x) u^{rs}_{ij,yx}
inline TensorElement action_of_basis(const PresentationPtr& p, const GradedAlgebra& alg, const TensorSpacePtr& hybrid, int b) {
  const BasisIndex& e = alg.basis(b);
  TensorElement r(hybrid);
  const auto& sp = p->spec;
  for (int y = 0; y < sp.blocks(); ++y)
    for (int rr = 0; rr < sp.size(y); ++rr)
      for (int ss = 0; ss < sp.size(y); ++ss)
        r.add_term({Word{0, {static_cast<Letter>(alg.index(y, rr, ss))}}, Word{0, {p->at(rr, ss, e.row, e.col, y, e.block)}}}, Scalar(1));
  return r;
}

inline TensorElement action_of(const PresentationPtr& p, const GradedAlgebra& alg, const TensorSpacePtr& hybrid, const AlgebraElement& a) {
  TensorElement r(hybrid);
  for (const auto& [b, c] : a.terms()) r += c * action_of_basis(p, alg, hybrid, b);
  return r;
}

inline std::string phi_family(const Presentation& p) { return p.spec.blocks() == 1 ? "cond6" : "dirsum5"; }

inline VerificationReport verify_action(const PresentationPtr& p, const std::shared_ptr<const GradedAlgebra>& alg, const SuiteOptions& opt = {}) {
  if (p->kind != PresentationKind::braided) throw std::invalid_argument("the action suite needs a braided presentation");
  if (!(alg->spec() == p->spec)) throw std::invalid_argument("algebra and presentation use different gradings");
  VerificationReport r = make_report("action", *p);
  r.notes.push_back(std::string("functional ") + (alg->functional_choice() == FunctionalChoice::normalized_trace ? "normalized-trace" : "block-delta"));
  ReportBuilder rb(r);
  const auto hybrid = make_space({SlotAlgebra::matrix(alg), SlotAlgebra::presented(p)}, true);
  const int dim = alg->dim();
  std::vector<TensorElement> eta;
  for (int b = 0; b < dim; ++b) eta.push_back(action_of_basis(p, *alg, hybrid, b));

  std::vector<PendingCheck> batch;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      TensorElement t = tensor_multiply(eta[static_cast<std::size_t>(a)], eta[static_cast<std::size_t>(b)]);
      if (auto prod = alg->product(a, b)) t -= eta[static_cast<std::size_t>(*prod)];
      batch.push_back({"mult " + alg->basis_name(a) + "." + alg->basis_name(b), std::move(t), p, {}, {}});
    }
  for (int a = 0; a < dim; ++a)
    batch.push_back({"star " + alg->basis_name(a), eta[static_cast<std::size_t>(alg->star_index(a))] - tensor_star(eta[static_cast<std::size_t>(a)]), p, {}, {}});
  {
    TensorElement t = action_of(p, *alg, hybrid, alg->unit()) - TensorElement::unit(hybrid);
    batch.push_back({"unit", std::move(t), p, {}, {}});
  }
  // sum_{rs} eta(E_rs) (1 (x) (u^{kl}_{rs})*) = E_kl (x) 1
  const auto presented1 = tensor_power(p, 1);
  for (int k = 0; k < dim; ++k) {
    const BasisIndex& ek = alg->basis(k);
    TensorElement t(hybrid);
    for (int b = 0; b < dim; ++b) {
      const BasisIndex& eb = alg->basis(b);
      const Letter g = p->at(ek.row, ek.col, eb.row, eb.col, ek.block, eb.block);
      TensorElement right(hybrid);
      const auto st = SlotAlgebra::presented(p).star(Word{0, {g}});
      for (const auto& uw : SlotAlgebra::matrix(alg).unit()) right.add_term({uw, st.word}, phase(st.exponent, p->mode));
      t += tensor_multiply(eta[static_cast<std::size_t>(b)], right);
    }
    for (const auto& uw : SlotAlgebra::presented(p).unit()) t.add_term({Word{0, {static_cast<Letter>(k)}}, uw}, Scalar(-1));
    batch.push_back({"podles " + alg->basis_name(k), std::move(t), p, {}, {}});
  }
  rb.certify(std::move(batch), opt);

  // Comodule law in D (x) A (x) A.
  const auto cube = make_space({SlotAlgebra::matrix(alg), SlotAlgebra::presented(p), SlotAlgebra::presented(p)}, true);
  const auto square = tensor_power(p, 2);
  for (int a = 0; a < dim; ++a) {
    const TensorElement& e = eta[static_cast<std::size_t>(a)];
    TensorElement lhs = apply_in_slot(e, 1, cube, [&](const Word& w) { return coproduct_of_word(p, square, w); });
    TensorElement rhs = apply_in_slot(e, 0, cube, [&](const Word& w) { return eta[w.letters.front()]; });
    rb.syntactic("comodule " + alg->basis_name(a), lhs == rhs, std::to_string(lhs.size()) + " terms");
  }

  // (phi (x) id) eta(E) = phi(E) 1, using only the column-sum relations.
  std::vector<PendingCheck> phi_batch;
  for (int a = 0; a < dim; ++a) {
    TensorElement t(presented1);
    for (const auto& [k, c] : eta[static_cast<std::size_t>(a)].terms()) {
      const Scalar f = alg->functional_value(k[0].letters.front());
      if (!f.is_zero()) t.add_term({k[1]}, f * c);
    }
    t.add_term({Word{}}, -alg->functional_value(a));
    phi_batch.push_back({"phi " + alg->basis_name(a), std::move(t), p, {phi_family(*p)}, "relations " + phi_family(*p)});
  }
  rb.certify(std::move(phi_batch), opt);
  return r;
}

// ---------------------------------------------------------------------------
// Candidate homomorphisms between presentations

struct HomRule {
  std::string name;
  PresentationPtr source;
  PresentationPtr target;
  std::vector<FreeElement> images;      // per source generator, in target words
  std::optional<FreeElement> unitary;   // image of the source unitary
  bool coalgebra_map = true;
};

// Image of a source word as a one-slot target element.
inline TensorElement apply_rule(const HomRule& rule, const TensorSpacePtr& target1, const Word& w) {
  TensorElement acc = TensorElement::unit(target1);
  if (w.power != 0) {
    if (!rule.unitary) throw std::invalid_argument("rule has no image for the unitary");
    TensorElement z = single_slot(target1, *rule.unitary);
    if (w.power < 0) z = tensor_star(z);
    for (int i = 0; i < std::abs(w.power); ++i) acc = tensor_multiply(acc, z);
  }
  for (Letter g : w.letters) acc = tensor_multiply(acc, single_slot(target1, rule.images.at(g)));
  return acc;
}

inline TensorElement apply_rule(const HomRule& rule, const TensorSpacePtr& target1, const FreeElement& e) {
  TensorElement r(target1);
  for (const auto& [w, c] : e) r += c * apply_rule(rule, target1, w);
  return r;
}

inline HomRule identity_rule(const PresentationPtr& p) {
  HomRule r{"identity", p, p, {}, std::nullopt};
  for (Letter g = 0; g < p->letter_count(); ++g) r.images.push_back(FreeElement{{Word{0, {g}}, Scalar(1)}});
  if (p->has_unitary()) r.unitary = FreeElement{{Word{1, {}}, Scalar(1)}};
  return r;
}

// u^{ij}_{kl} -> delta_ik delta_jl 1 (and z -> 1): the classical counit.
inline HomRule counit_rule(const PresentationPtr& p) {
  HomRule r{"counit", p, p, {}, std::nullopt};
  for (const auto& g : p->generators) {
    FreeElement e;
    if (g.i == g.k && g.j == g.l && g.x == g.y) e.emplace(Word{}, Scalar(1));
    r.images.push_back(std::move(e));
  }
  if (p->has_unitary()) r.unitary = FreeElement{{Word{}, Scalar(1)}};
  r.coalgebra_map = false;
  return r;
}

// Bosonised -> crossed-product symmetry presentation: z -> v, u^{ij}_{kl} -> v^{d_j - d_i} q^{ij}_{kl}.
inline HomRule bosonised_to_qiso(const PresentationPtr& c, const PresentationPtr& q) {
  HomRule r{"bosonised->qiso", c, q, {}, FreeElement{{Word{1, {}}, Scalar(1)}}};
  for (const auto& g : c->generators) {
    const int shift = c->spec.degree(0, g.j) - c->spec.degree(0, g.i);
    r.images.push_back(FreeElement{{Word{shift, {q->at(g.i, g.j, g.k, g.l)}}, Scalar(1)}});
  }
  return r;
}

// Crossed-product symmetry presentation -> bosonised: v -> z, q^{ij}_{kl} -> z^{d_i - d_j} u^{ij}_{kl}.
inline HomRule qiso_to_bosonised(const PresentationPtr& q, const PresentationPtr& c) {
  HomRule r{"qiso->bosonised", q, c, {}, FreeElement{{Word{1, {}}, Scalar(1)}}};
  for (const auto& g : q->generators) {
    const int shift = q->spec.degree(0, g.i) - q->spec.degree(0, g.j);
    r.images.push_back(FreeElement{{Word{shift, {c->at(g.i, g.j, g.k, g.l)}}, Scalar(1)}});
  }
  return r;
}

inline bool homogeneous_of_degree(const Presentation& p, const FreeElement& e, int degree) {
  return std::all_of(e.begin(), e.end(), [&](const auto& t) { return p.word_degree(t.first) == degree; });
}

inline VerificationReport verify_candidate_hom(const HomRule& rule, const SuiteOptions& opt = {}) {
  const PresentationPtr& s = rule.source;
  const PresentationPtr& t = rule.target;
  VerificationReport r = make_report("hom " + rule.name, *t);
  r.notes.push_back("source " + s->schema + ", target " + t->schema);
  ReportBuilder rb(r);
  const auto t1 = tensor_power(t, 1);
  const auto t2 = tensor_power(t, 2);
  const auto s2 = tensor_power(s, 2);
  for (Letter g = 0; g < s->letter_count(); ++g)
    rb.syntactic("degree " + s->letter_name(g), homogeneous_of_degree(*t, rule.images.at(g), s->generator(g).degree));

  std::vector<PendingCheck> batch;
  for (std::size_t i = 0; i < s->relations.size(); ++i)
    batch.push_back({"relation " + s->relations[i].instances.front(), apply_rule(rule, t1, s->relations[i].element), t, {}, {}});
  for (Letter g = 0; g < s->letter_count(); ++g) {
    const auto& gen = s->generator(g);
    TensorElement lhs = tensor_star(apply_rule(rule, t1, Word{0, {g}}));
    TensorElement rhs = phase(gen.star_exponent, s->mode) * apply_rule(rule, t1, Word{0, {gen.star_letter}});
    batch.push_back({"star " + s->letter_name(g), lhs - rhs, t, {}, {}});
  }
  if (s->has_unitary()) {
    const TensorElement z = apply_rule(rule, t1, Word{1, {}});
    const TensorElement zs = tensor_star(z);
    const TensorElement one = TensorElement::unit(t1);
    batch.push_back({"unitary z*z", tensor_multiply(zs, z) - one, t, {}, {}});
    batch.push_back({"unitary zz*", tensor_multiply(z, zs) - one, t, {}, {}});
    for (Letter g = 0; g < s->letter_count(); ++g) {
      const TensorElement fg = apply_rule(rule, t1, Word{0, {g}});
      TensorElement lhs = tensor_multiply(tensor_multiply(z, fg), zs);
      batch.push_back({"commute " + s->letter_name(g), lhs - phase(-s->generator(g).degree, s->mode) * fg, t, {}, {}});
    }
  }
  // Delta_t(f(g)) = (f (x) f)(Delta_s(g))
  auto compat = [&](const std::string& id, const Word& w) {
    TensorElement lhs(t2);
    const TensorElement image = apply_rule(rule, t1, w);
    for (const auto& [k, c] : image.terms()) lhs += c * coproduct_of_word(t, t2, k[0]);
    TensorElement rhs(t2);
    const TensorElement ds = coproduct_of_word(s, s2, w);
    for (const auto& [k, c] : ds.terms()) {
      const TensorElement left = apply_rule(rule, t1, k[0]);
      const TensorElement right = apply_rule(rule, t1, k[1]);
      for (const auto& [kl, cl] : left.terms())
        for (const auto& [kr, cr] : right.terms()) rhs.add_term({kl[0], kr[0]}, c * cl * cr);
    }
    batch.push_back({id, lhs - rhs, t, {}, {}});
  };
  if (rule.coalgebra_map) {
    for (Letter g = 0; g < s->letter_count(); ++g) compat("delta " + s->letter_name(g), Word{0, {g}});
    if (s->has_unitary()) compat(std::string("delta ") + s->unitary_name(), Word{1, {}});
  }
  rb.certify(std::move(batch), opt);
  return r;
}

// Rewrites the source relations through a monomial rule, strips the common unitary power of each
// image and normalises; the result can be compared with the target's own relation set.
inline std::vector<std::string> substitute_relations(const HomRule& rule) {
  const auto t1 = tensor_power(rule.target, 1);
  std::set<std::string> out;
  for (const auto& rel : rule.source->relations) {
    TensorElement img = apply_rule(rule, t1, rel.element);
    if (img.is_zero()) continue;
    int power = img.terms().begin()->first[0].power;
    for (const auto& [k, c] : img.terms())
      if (k[0].power != power) throw std::invalid_argument("image mixes unitary powers");
    // z^{-p} (z^p w) = w
    FreeElement e;
    for (const auto& [k, c] : img.terms()) e.emplace(Word{0, k[0].letters}, c);
    e = detail::normalize_relation(e);
    out.insert(element_text(e, [&](const Word& w) { return rule.target->word_name(w); }));
  }
  return {out.begin(), out.end()};
}

inline std::vector<std::string> relation_text_set(const Presentation& p) {
  auto v = relation_texts(p);
  std::set<std::string> s(v.begin(), v.end());
  return {s.begin(), s.end()};
}

// Both directions of the crossed-product symmetry correspondence, plus syntactic round trips.
inline VerificationReport verify_qiso_equivalence(const GradingSpec& spec, ZetaMode mode, const SuiteOptions& opt = {}) {
  const auto c = gen_bosonisation(*gen_braided_aut(spec, mode));
  const auto q = gen_qiso_crossed(spec, mode);
  const HomRule cq = bosonised_to_qiso(c, q);
  const HomRule qc = qiso_to_bosonised(q, c);
  VerificationReport r;
  r.suite = "qiso-equiv";
  r.spec = spec.to_string();
  r.zeta = mode.to_string();
  for (const HomRule* rule : {&cq, &qc}) absorb(r, verify_candidate_hom(*rule, opt), rule->name + " ");
  ReportBuilder rb(r);
  rb.syntactic("substituted relations qiso->bosonised", substitute_relations(qc) == relation_text_set(*c));
  rb.syntactic("substituted relations bosonised->qiso", substitute_relations(cq) == relation_text_set(*q));
  const auto c1 = tensor_power(c, 1);
  const auto q1 = tensor_power(q, 1);
  bool round = true;
  for (Letter g = 0; g < q->letter_count(); ++g) {
    TensorElement back(q1);
    const TensorElement there = apply_rule(qc, c1, Word{0, {g}});
    for (const auto& [k, cf] : there.terms()) back += cf * apply_rule(cq, q1, k[0]);
    round = round && back == TensorElement::monomial(q1, {Word{0, {g}}});
  }
  rb.syntactic("round trip qiso->bosonised->qiso", round);
  round = true;
  for (Letter g = 0; g < c->letter_count(); ++g) {
    TensorElement back(c1);
    const TensorElement there = apply_rule(cq, q1, Word{0, {g}});
    for (const auto& [k, cf] : there.terms()) back += cf * apply_rule(qc, c1, k[0]);
    round = round && back == TensorElement::monomial(c1, {Word{0, {g}}});
  }
  rb.syntactic("round trip bosonised->qiso->bosonised", round);
  return r;
}

// ---------------------------------------------------------------------------
// Classical degenerations

inline VerificationReport verify_degenerations(const GradingSpec& spec, ZetaMode mode, const SuiteOptions& opt = {}) {
  VerificationReport r;
  r.suite = "degenerations";
  r.spec = spec.to_string();
  r.zeta = mode.to_string();
  ReportBuilder rb(r);
  {
    const auto at_one = gen_braided_aut(spec, ZetaMode::root_of_unity(1));
    const auto zero = gen_braided_aut(spec, ZetaMode::root_of_unity(1), PresentationOptions{true});
    rb.syntactic("zeta=1 equals zero-phase schema", relation_text_set(*at_one) == relation_text_set(*zero),
                 std::to_string(at_one->relations.size()) + " relations");
  }
  for (int x = 0; x < spec.blocks(); ++x) {
    const int n = spec.size(x);
    std::vector<int> flat(static_cast<std::size_t>(n), spec.degree(x, 0));
    const auto trivial = gen_braided_aut(GradingSpec::single(flat), mode);
    const auto wang = gen_wang(n, mode);
    rb.syntactic("trivial grading equals wang schema n=" + std::to_string(n), relation_text_set(*trivial) == relation_text_set(*wang),
                 std::to_string(wang->relations.size()) + " relations");
  }
  {
    const int m = spec.blocks();
    std::vector<std::vector<int>> points(static_cast<std::size_t>(m), std::vector<int>{0});
    const auto p = gen_braided_aut(GradingSpec::make(points), mode);
    const auto s1 = tensor_power(p, 1);
    auto a = [&](int x, int y) { return Word{0, {p->at(0, 0, 0, 0, x, y)}}; };
    bool self_adjoint = true;
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        const auto& g = p->generator(a(x, y).letters.front());
        self_adjoint = self_adjoint && g.star_letter == a(x, y).letters.front() && phase(g.star_exponent, mode).is_one();
      }
    rb.syntactic("magic m=" + std::to_string(m) + " a=a*", self_adjoint);
    std::vector<PendingCheck> batch;
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        TensorElement t = TensorElement::monomial(s1, {concat(a(x, y), a(x, y))});
        t.add_term({a(x, y)}, Scalar(-1));
        batch.push_back({"magic a(" + std::to_string(x + 1) + "," + std::to_string(y + 1) + ")^2=a", std::move(t), p, {}, {}});
      }
    for (int x = 0; x < m; ++x) {
      TensorElement row(s1), col(s1);
      for (int y = 0; y < m; ++y) {
        row.add_term({a(x, y)}, Scalar(1));
        col.add_term({a(y, x)}, Scalar(1));
      }
      row.add_term({Word{}}, Scalar(-1));
      col.add_term({Word{}}, Scalar(-1));
      batch.push_back({"magic row " + std::to_string(x + 1), std::move(row), p, {}, {}});
      batch.push_back({"magic column " + std::to_string(x + 1), std::move(col), p, {}, {}});
    }
    rb.certify(std::move(batch), opt);
  }
  return r;
}

}  // namespace qaut
