#include "qaut/verifier.hpp"
#include "support/model.hpp"

#include <gtest/gtest.h>

using namespace qaut;
using qaut_test::adjoint;
using qaut_test::hadamard_like;
using qaut_test::mixing_unitary;
using qaut_test::OrbitModel;

namespace {

SuiteOptions quick() { return SuiteOptions{3, 2}; }

void expect_all_replay(const VerificationReport& r) {
  const auto bundles = parse_bundles(r.certificates_text());
  std::size_t n = 0;
  for (const auto& b : bundles)
    for (const auto& nc : b.certificates) {
      EXPECT_TRUE(replay(nc.certificate)) << r.suite << " " << nc.check;
      ++n;
    }
  EXPECT_EQ(n, r.count(CheckStatus::certified));
}

const CheckRecord& find_check(const VerificationReport& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return c;
  throw std::logic_error("no check " + id);
}

// Character of the classical point g: u^{ij}_{kl} -> g_ik conj(g_jl).
Scalar character(const Presentation& p, const ScalarMatrix& g, const Word& w) {
  Scalar acc(1);
  for (Letter l : w.letters) {
    const auto& q = p.generator(l);
    acc *= g(static_cast<std::size_t>(q.i), static_cast<std::size_t>(q.k)) * g(static_cast<std::size_t>(q.j), static_cast<std::size_t>(q.l)).star();
  }
  return acc;
}

// Evaluates an element of (matrix algebra) (x) (presented algebra) at a classical point.
ScalarMatrix at_point(const TensorElement& t, const Presentation& p, const GradedAlgebra& alg, const ScalarMatrix& g) {
  const auto n = static_cast<std::size_t>(alg.spec().total());
  ScalarMatrix out(n, n);
  for (const auto& [k, c] : t.terms()) {
    const BasisIndex& e = alg.basis(k[0].letters.front());
    out(static_cast<std::size_t>(e.row), static_cast<std::size_t>(e.col)) += c * character(p, g, k[1]);
  }
  return out;
}

}  // namespace

TEST(Verifier, UnitarityCertifiesAndReplays) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::generic());
  const auto r = verify_unitarity(p, quick());
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.count(CheckStatus::certified), 32u);
  const auto& c = find_check(r, "u*u(1,2)(1,2)");
  EXPECT_EQ(c.status, CheckStatus::certified);
  EXPECT_GE(c.cap, 2);
  EXPECT_LE(c.cap, 3);
  expect_all_replay(r);
  EXPECT_NE(r.text().find("check uu*(2,2)(2,2) certified cap"), std::string::npos);
  EXPECT_EQ(r.machine()["summary"]["certified"], 32);
}

// Independent check of the same claim: the fundamental matrix is unitary in the orbit model.
TEST(Verifier, UnitarityHoldsInTheModel) {
  const auto mode = ZetaMode::root_of_unity(8);
  for (const std::vector<int>& d : {std::vector<int>{0, 1}, std::vector<int>{0, 1, 1}}) {
    const int n = static_cast<int>(d.size());
    const OrbitModel m(d, mode, mixing_unitary(n, mode));
    const auto one = ScalarMatrix::identity(m.dim()), zero = ScalarMatrix(m.dim(), m.dim());
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int k2 = 0; k2 < n; ++k2)
          for (int l2 = 0; l2 < n; ++l2) {
            ScalarMatrix us_u = zero, u_us = zero;
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                us_u = us_u + adjoint(m.u(i, j, k, l)) * m.u(i, j, k2, l2);
                u_us = u_us + m.u(k, l, i, j) * adjoint(m.u(k2, l2, i, j));
              }
            const bool diagonal = k == k2 && l == l2;
            EXPECT_EQ(us_u, diagonal ? one : zero);
            EXPECT_EQ(u_us, diagonal ? one : zero);
          }
  }
}

TEST(Verifier, ComultiplicationRecordsCaps) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::generic());
  const auto r = verify_comult_welldefined(p, SuiteOptions{4, 2});
  EXPECT_TRUE(r.ok());
  ASSERT_FALSE(r.notes.empty());
  EXPECT_NE(r.notes.front().find("d_k - d_i + d_j - d_l"), std::string::npos);
  std::size_t delta = 0;
  for (const auto& c : r.checks) {
    if (c.id.rfind("delta ", 0) != 0) continue;
    ++delta;
    EXPECT_EQ(c.status, CheckStatus::certified) << c.id;
    // Never below the longest word of the target, never above the requested cap.
    EXPECT_GE(c.cap, c.id.find("cond5") != std::string::npos || c.id.find("cond6") != std::string::npos ? 1 : 2);
    EXPECT_LE(c.cap, 4);
  }
  EXPECT_EQ(delta, p->relations.size());
  expect_all_replay(r);
}

TEST(Verifier, ComultiplicationReportsMergedInstances) {
  // Three points: 60 instances collapse to 51 distinct relations.
  const auto p = gen_braided_aut(GradingSpec::make({{0}, {0}, {0}}), ZetaMode::generic());
  const auto r = verify_comult_welldefined(p, quick());
  EXPECT_TRUE(r.ok());
  std::size_t covered = 0;
  for (const auto& c : r.checks)
    if (c.detail.find(" covers ") != std::string::npos) covered += std::stoul(c.detail.substr(c.detail.find(" covers ") + 8));
  EXPECT_EQ(covered, 18u);
}

TEST(Verifier, CoassociativityIsSyntactic) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1, 2}), ZetaMode::generic());
  const auto braided = verify_coassociativity(p);
  EXPECT_TRUE(braided.ok());
  EXPECT_EQ(braided.count(CheckStatus::passed), 81u);
  const auto bos = verify_coassociativity(gen_bosonisation(*p));
  EXPECT_TRUE(bos.ok());
  EXPECT_EQ(bos.count(CheckStatus::passed), 82u);
  EXPECT_EQ(find_check(bos, "z").status, CheckStatus::passed);
}

TEST(Verifier, ActionSuite) {
  const auto spec = GradingSpec::single({0, 1});
  const auto mode = ZetaMode::root_of_unity(8);
  const auto p = gen_braided_aut(spec, mode);
  const auto alg = make_matrix_algebra(spec, FunctionalChoice::normalized_trace, mode);
  const auto r = verify_action(p, alg, quick());
  EXPECT_TRUE(r.ok());
  std::size_t phi = 0;
  for (const auto& c : r.checks)
    if (c.id.rfind("phi ", 0) == 0) {
      ++phi;
      EXPECT_EQ(c.detail, "relations cond6");
      EXPECT_EQ(c.status, CheckStatus::certified);
    }
  EXPECT_EQ(phi, 4u);
  EXPECT_EQ(find_check(r, "comodule E(1,2)").status, CheckStatus::passed);
  EXPECT_EQ(find_check(r, "podles E(2,1)").status, CheckStatus::certified);
  expect_all_replay(r);
  EXPECT_THROW(verify_action(gen_bosonisation(*p), alg), std::invalid_argument);
}

TEST(Verifier, ActionSuiteOnDirectSums) {
  const auto spec = GradingSpec::make({{0, 1}, {0}});
  const auto p = gen_braided_aut(spec, ZetaMode::generic());
  const auto alg = make_matrix_algebra(spec, FunctionalChoice::block_delta, ZetaMode::generic());
  const auto r = verify_action(p, alg, quick());
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(find_check(r, "phi E(1,1;1)").detail, "relations dirsum5");
}

// The identity with (u^{rs}_{kl})* in place of (u^{kl}_{rs})* fails at a classical point
// whenever g conj(g) is not scalar; the engine must not certify it.
TEST(Verifier, PodlesIdentityOrientation) {
  const auto spec = GradingSpec::single({0, 0});
  const auto mode = ZetaMode::root_of_unity(8);
  const auto p = gen_braided_aut(spec, mode);
  const auto alg = make_matrix_algebra(spec, FunctionalChoice::normalized_trace, mode);
  const auto hybrid = make_space({SlotAlgebra::matrix(alg), SlotAlgebra::presented(p)}, true);
  const ScalarMatrix g = hadamard_like(mode);
  ScalarMatrix g_conj(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) g_conj(i, j) = g(i, j).star();
  ASSERT_FALSE((g * g_conj)(0, 1).is_zero());  // not a scalar

  auto podles = [&](int k, bool swapped) {
    const BasisIndex& ek = alg->basis(k);
    TensorElement t(hybrid);
    for (int b = 0; b < alg->dim(); ++b) {
      const BasisIndex& eb = alg->basis(b);
      const Letter letter = swapped ? p->at(eb.row, eb.col, ek.row, ek.col) : p->at(ek.row, ek.col, eb.row, eb.col);
      const auto st = SlotAlgebra::presented(p).star(Word{0, {letter}});
      TensorElement right(hybrid);
      for (const auto& uw : SlotAlgebra::matrix(alg).unit()) right.add_term({uw, st.word}, phase(st.exponent, mode));
      t += tensor_multiply(action_of_basis(p, *alg, hybrid, b), right);
    }
    for (const auto& uw : SlotAlgebra::presented(p).unit()) t.add_term({Word{0, {static_cast<Letter>(k)}}, uw}, Scalar(-1));
    return t;
  };
  bool some_literal_failure = false;
  for (int k = 0; k < alg->dim(); ++k) {
    const auto good = podles(k, false), bad = podles(k, true);
    EXPECT_TRUE(at_point(good, *p, *alg, g).is_zero());
    if (!at_point(bad, *p, *alg, g).is_zero()) {
      some_literal_failure = true;
      EXPECT_FALSE(certified(certify_zero(bad, p, CertifyOptions{.cap = 3})));
    }
    EXPECT_TRUE(certified(certify_zero(good, p, CertifyOptions{.cap = 3})));
  }
  EXPECT_TRUE(some_literal_failure);
}

// (chi_g (x) chi_h) Delta = chi_{gh} on generators and on relations.
TEST(Verifier, ClassicalPointsMultiplyUnderTheCoproduct) {
  const auto mode = ZetaMode::root_of_unity(8);
  for (int n : {2, 3}) {
    const auto p = gen_wang(n, mode);
    const auto square = tensor_power(p, 2);
    const ScalarMatrix g = mixing_unitary(n, mode);
    ScalarMatrix h = adjoint(g);
    for (std::size_t i = 0; i < h.rows(); ++i) h(0, i) = h(0, i) * phase(1, mode);
    const ScalarMatrix gh = g * h;
    auto pair_value = [&](const TensorElement& t) {
      Scalar acc;
      for (const auto& [k, c] : t.terms()) acc += c * character(*p, g, k[0]) * character(*p, h, k[1]);
      return acc;
    };
    for (Letter l = 0; l < p->letter_count(); ++l)
      EXPECT_EQ(pair_value(coproduct_of_letter(p, square, l)), character(*p, gh, Word{0, {l}}));
    for (const auto& rel : p->relations) EXPECT_TRUE(pair_value(coproduct(p, square, rel.element)).is_zero()) << rel.instances.front();
  }
}

TEST(Verifier, IdentityAndCounitRules) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::generic());
  EXPECT_TRUE(verify_candidate_hom(identity_rule(p), quick()).ok());
  const auto bos = gen_bosonisation(*p);
  EXPECT_TRUE(verify_candidate_hom(identity_rule(bos), quick()).ok());
  const auto classical = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(1));
  const auto counit = verify_candidate_hom(counit_rule(classical), quick());
  EXPECT_TRUE(counit.ok());
  for (const auto& c : counit.checks) EXPECT_NE(c.id.rfind("delta", 0), 0u);
}

TEST(Verifier, WrongRuleIsNotCertified) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::generic());
  HomRule zero = identity_rule(p);
  zero.name = "zero";
  for (auto& img : zero.images) img.clear();
  EXPECT_FALSE(verify_candidate_hom(zero, quick()).ok());
}

TEST(Verifier, QisoEquivalenceBothDirections) {
  const auto r = verify_qiso_equivalence(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(4), quick());
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(find_check(r, "substituted relations qiso->bosonised").status, CheckStatus::passed);
  EXPECT_EQ(find_check(r, "substituted relations bosonised->qiso").status, CheckStatus::passed);
  EXPECT_EQ(find_check(r, "round trip bosonised->qiso->bosonised").status, CheckStatus::passed);
  EXPECT_EQ(find_check(r, "bosonised->qiso unitary z*z").status, CheckStatus::certified);
  EXPECT_EQ(find_check(r, "qiso->bosonised delta v").status, CheckStatus::certified);
  expect_all_replay(r);
}

TEST(Verifier, Degenerations) {
  const auto single = verify_degenerations(GradingSpec::single({0, 1, 3}), ZetaMode::root_of_unity(8), quick());
  EXPECT_TRUE(single.ok());
  EXPECT_EQ(find_check(single, "trivial grading equals wang schema n=3").status, CheckStatus::passed);
  const auto magic = verify_degenerations(GradingSpec::make({{0}, {0}, {0}, {0}}), ZetaMode::generic(), quick());
  EXPECT_TRUE(magic.ok());
  EXPECT_EQ(find_check(magic, "magic a(2,3)^2=a").status, CheckStatus::certified);
  EXPECT_EQ(find_check(magic, "magic column 4").status, CheckStatus::certified);
  EXPECT_EQ(find_check(magic, "magic m=4 a=a*").status, CheckStatus::passed);
}

TEST(Verifier, AbsorbKeepsCertificateReferences) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::generic());
  VerificationReport all;
  all.suite = "combined";
  absorb(all, verify_unitarity(p, quick()), "a ");
  absorb(all, verify_unitarity(gen_bosonisation(*p), quick()), "b ");
  const auto& c = find_check(all, "b u*u(1,1)(1,1)");
  ASSERT_TRUE(c.certificate.has_value());
  EXPECT_EQ(all.reference(*c.certificate), "combined.certs#2.1");
  expect_all_replay(all);
}

TEST(Verifier, ParallelAndSerialReportsMatch) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::generic());
  const auto a = verify_comult_welldefined(p, SuiteOptions{3, 1});
  const auto b = verify_comult_welldefined(p, SuiteOptions{3, 4});
  EXPECT_EQ(a.text(), b.text());
  EXPECT_EQ(a.certificates_text(), b.certificates_text());
}
