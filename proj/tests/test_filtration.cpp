#include "qaut/filtration.hpp"
#include "support/model.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qaut;
using qaut_test::adjoint;
using qaut_test::power;

namespace {

// Finite representation of the crossed product by Z/N on l2(Z/N) (x) C^n:
// v is the cyclic shift and E acts on the fibre over a by zeta^{a deg E} E.
class CrossedModel {
 public:
  CrossedModel(std::shared_ptr<const GradedAlgebra> alg) : alg_(std::move(alg)) {
    const auto& mode = alg_->mode();
    big_n_ = static_cast<std::size_t>(mode.order());
    n_ = static_cast<std::size_t>(alg_->spec().total());
    shift_ = ScalarMatrix(big_n_ * n_, big_n_ * n_);
    for (std::size_t a = 0; a < big_n_; ++a)
      for (std::size_t i = 0; i < n_; ++i) shift_(((a + 1) % big_n_) * n_ + i, a * n_ + i) = Scalar(1);
  }

  ScalarMatrix basis(int r, int b) const {
    const BasisIndex& e = alg_->basis(b);
    const auto row = static_cast<std::size_t>(alg_->spec().offset(e.block) + e.row);
    const auto col = static_cast<std::size_t>(alg_->spec().offset(e.block) + e.col);
    ScalarMatrix m(big_n_ * n_, big_n_ * n_);
    for (std::size_t a = 0; a < big_n_; ++a) m(a * n_ + row, a * n_ + col) = phase(static_cast<long long>(a) * alg_->degree(b), alg_->mode());
    return power(shift_, r) * m;
  }

  ScalarMatrix operator()(const CrossedElement& x) const {
    ScalarMatrix acc(big_n_ * n_, big_n_ * n_);
    for (const auto& [k, c] : x.terms()) acc = acc + basis(k.first, k.second).scaled(c);
    return acc;
  }

  Scalar normalized_trace(const ScalarMatrix& m) const {
    Scalar t;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t * Scalar::rational(1, static_cast<long>(m.rows()));
  }

 private:
  std::shared_ptr<const GradedAlgebra> alg_;
  std::size_t big_n_ = 0, n_ = 0;
  ScalarMatrix shift_;
};

CrossedElement random_crossed(const std::shared_ptr<const GradedAlgebra>& alg, int radius, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-2, 2), expo(-3, 3), pw(-radius, radius), pick(0, alg->dim() - 1);
  CrossedElement x(alg);
  for (int t = 0; t < 4; ++t) x.add_term(pw(rng), pick(rng), Scalar(coef(rng)) * phase(expo(rng), alg->mode()));
  return x;
}

std::shared_ptr<const GradedAlgebra> matrices(std::vector<int> d, int root) {
  return make_matrix_algebra(GradingSpec::single(std::move(d)), FunctionalChoice::normalized_trace, ZetaMode::root_of_unity(root));
}

}  // namespace

TEST(CrossedProduct, ProductAndStarMatchTheModel) {
  std::mt19937 rng(21);
  for (const auto& alg : {matrices({0, 1}, 8), matrices({0, 1, 3}, 8)}) {
    const CrossedModel model(alg);
    for (int trial = 0; trial < 8; ++trial) {
      const auto a = random_crossed(alg, 2, rng), b = random_crossed(alg, 2, rng);
      EXPECT_EQ(model(a * b), model(a) * model(b));
      EXPECT_EQ(model(a.star()), adjoint(model(a)));
      EXPECT_EQ(crossed_trace(a * b), model.normalized_trace(model(a) * model(b)));
    }
  }
}

TEST(CrossedProduct, CommutationRule) {
  const auto alg = matrices({0, 1}, 8);
  const auto v = CrossedElement::unitary_power(alg, 1);
  const auto e12 = CrossedElement::basis(alg, 0, alg->index(0, 0, 1));
  // deg E12 = -1, so v E12 v* = zeta E12.
  EXPECT_EQ(v * e12 * v.star(), phase(1, alg->mode()) * e12);
  EXPECT_EQ(v * v.star(), CrossedElement::unitary_power(alg, 0));
}

TEST(CrossedProduct, AlgebraPropertiesOnRandomElements) {
  std::mt19937 rng(5);
  const auto alg = matrices({0, 1, 2}, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_crossed(alg, 2, rng), b = random_crossed(alg, 2, rng), c = random_crossed(alg, 2, rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a.star().star(), a);
    EXPECT_EQ((a * b).star(), b.star() * a.star());
  }
}

TEST(CrossedProduct, RadiusIsTracked) {
  const auto alg = matrices({0, 1}, 4);
  const auto v2 = CrossedElement::unitary_power(alg, 2);
  EXPECT_EQ(v2.radius(), 2);
  EXPECT_EQ((v2 * v2).radius(), 4);
  EXPECT_EQ((v2 * v2.star()).radius(), 2);
}

TEST(CrossedTrace, Examples) {
  const auto alg = matrices({0, 1}, 4);
  EXPECT_EQ(crossed_trace(CrossedElement::unitary_power(alg, 0)), Scalar(1));
  EXPECT_TRUE(crossed_trace(CrossedElement::basis(alg, 2, alg->index(0, 0, 0))).is_zero());
  EXPECT_EQ(crossed_trace(CrossedElement::basis(alg, 0, alg->index(0, 1, 1))), Scalar::rational(1, 2));
  // (v E12)*(v E12) = E12* E12 = E22 since v is unitary.
  const auto x = CrossedElement::basis(alg, 1, alg->index(0, 0, 1));
  EXPECT_EQ(crossed_trace(x.star() * x), Scalar::rational(1, 2));
  EXPECT_TRUE(crossed_trace(CrossedElement::unitary_power(alg, 1).star() * CrossedElement::basis(alg, 3, alg->index(0, 0, 1))).is_zero());
}

TEST(CrossedTrace, PositiveOnSquares) {
  std::mt19937 rng(8);
  const auto alg = matrices({0, 1, 2}, 8);
  std::uniform_int_distribution<int> coef(-3, 3), expo(-5, 5), pw(-2, 2), pick(0, alg->dim() - 1);
  for (int trial = 0; trial < 20; ++trial) {
    CrossedElement a(alg);
    std::map<std::pair<int, int>, int> chosen;
    for (int t = 0; t < 5; ++t) {
      const int r = pw(rng), b = pick(rng), c = coef(rng);
      if (c == 0 || chosen.count({r, b})) continue;
      chosen[{r, b}] = c;
      a.add_term(r, b, Scalar(c) * phase(expo(rng), alg->mode()));
    }
    // Distinct basis vectors are orthogonal and each has tau(x* x) = 1/n.
    long expected = 0;
    for (const auto& [k, c] : chosen) expected += static_cast<long>(c) * c;
    EXPECT_EQ(crossed_trace(a.star() * a), Scalar::rational(expected, 3));
  }
}

TEST(CrossedTrace, IsTracial) {
  for (int root : {1, 4, 8}) {
    EXPECT_FALSE(find_trace_counterexample(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(root), 2).has_value()) << root;
    EXPECT_FALSE(find_trace_counterexample(GradingSpec::single({0, 1, 2}), ZetaMode::root_of_unity(root), 1).has_value()) << root;
  }
}

TEST(Filtration, SinglePointGivesOnlyUnitaryPowers) {
  const auto f = build_crossed_filtration(GradingSpec::single({0}), ZetaMode::root_of_unity(4), 3);
  ASSERT_EQ(f.components.size(), 7u);
  for (const auto& c : f.components) {
    ASSERT_EQ(c.basis.size(), 1u);
    ASSERT_EQ(c.basis.front().terms().size(), 1u);
    const auto& [key, coeff] = *c.basis.front().terms().begin();
    EXPECT_TRUE(coeff.is_one());
    EXPECT_EQ(key.second, 0);
  }
  EXPECT_TRUE(check_orthogonality(f).ok());
}

TEST(Filtration, RadiusZeroIsTheMatrixFiltration) {
  const auto f = build_crossed_filtration(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(4), 0);
  ASSERT_EQ(f.components.size(), 3u);
  const auto& alg = f.algebra;
  EXPECT_EQ(f.components[0].basis.front(), CrossedElement::unitary_power(alg, 0));
  EXPECT_EQ(f.components[1].basis.front(), CrossedElement::basis(alg, 0, alg->index(0, 0, 1)));
  EXPECT_EQ(f.components[2].basis.front(), CrossedElement::basis(alg, 0, alg->index(0, 1, 0)));
}

TEST(Filtration, ComponentTally) {
  // Enumerated independently: one v^r per |r| <= R, plus one v^s E_ij per |s| <= R and i != j.
  for (int n : {1, 2, 3})
    for (int radius : {0, 1, 2, 3}) {
      std::vector<int> d(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = i;
      std::size_t expected = 0;
      for (int r = -radius; r <= radius; ++r) {
        ++expected;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) expected += i != j;
      }
      const auto f = build_crossed_filtration(GradingSpec::single(d), ZetaMode::root_of_unity(4), radius);
      EXPECT_EQ(f.components.size(), expected);
      EXPECT_EQ(f.dimension(), expected);
    }
}

TEST(Filtration, TracelessVariantSpansTheKernel) {
  const auto f = build_crossed_filtration(GradingSpec::single({0, 1, 2}), ZetaMode::root_of_unity(8), 1, FiltrationVariant::traceless);
  // Per power: span{v^s} plus v^s times the 8-dimensional kernel of phi.
  EXPECT_EQ(f.dimension(), 3u * (1 + 8));
  for (const auto& c : f.components)
    for (const auto& x : c.basis)
      if (c.basis.size() > 1) {
        EXPECT_TRUE(crossed_trace(CrossedElement::unitary_power(f.algebra, 0) * x).is_zero());
      }
}

TEST(Filtration, OrthogonalityAgreesWithTheModel) {
  const auto f = build_crossed_filtration(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(8), 2);
  EXPECT_TRUE(check_orthogonality(f, 2).ok());
  const CrossedModel model(f.algebra);
  for (std::size_t i = 0; i < f.components.size(); ++i)
    for (std::size_t j = 0; j < f.components.size(); ++j) {
      if (i == j) continue;
      for (const auto& a : f.components[i].basis)
        for (const auto& b : f.components[j].basis) EXPECT_TRUE(model.normalized_trace(adjoint(model(a)) * model(b)).is_zero());
    }
}

TEST(Filtration, OrthogonalitySweep) {
  for (int root : {1, 4, 8})
    for (const std::vector<int>& d : {std::vector<int>{0}, std::vector<int>{0, 1}, std::vector<int>{0, 1, 2}})
      for (auto variant : {FiltrationVariant::literal, FiltrationVariant::traceless}) {
        const auto f = build_crossed_filtration(GradingSpec::single(d), ZetaMode::root_of_unity(root), 2, variant);
        const auto o = check_orthogonality(f, 2);
        EXPECT_TRUE(o.ok());
        EXPECT_GT(o.pairs_checked, 0u);
      }
}

TEST(Filtration, ViolationsAreReported) {
  Filtration f = build_crossed_filtration(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(4), 0);
  const auto& alg = f.algebra;
  f.components.push_back({"overlap", {CrossedElement::basis(alg, 0, alg->index(0, 0, 1)) + CrossedElement::unitary_power(alg, 0)}});
  const auto o = check_orthogonality(f);
  ASSERT_FALSE(o.ok());
  EXPECT_TRUE(o.violations.front().left == "overlap" || o.violations.front().right == "overlap");
  EXPECT_THROW(build_crossed_filtration(GradingSpec::single({0, 1}), ZetaMode::generic(), -1), std::invalid_argument);
}

TEST(Filtration, SuiteReport) {
  const auto r = verify_filtration(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(4), 2, FunctionalChoice::normalized_trace);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.count(CheckStatus::passed), 3u * 2 + 1);
  EXPECT_NE(r.text().find("check orthogonality literal R=2 passed : 15 components"), std::string::npos);
}

TEST(LiftedAction, CertifiesAtRootFour) {
  const auto r = verify_lifted_action(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(4), SuiteOptions{3, 2});
  EXPECT_TRUE(r.ok());
  for (const auto& c : r.checks) {
    const bool derived = c.id.rfind("twist ", 0) == 0 || c.id.rfind("filtration trace ", 0) == 0;
    const bool syntactic = c.id.rfind("restriction ", 0) == 0 || c.id.rfind("comodule ", 0) == 0;
    if (derived || syntactic) {
      EXPECT_EQ(c.status, derived ? CheckStatus::certified : CheckStatus::passed) << c.id;
    }
  }
  const auto bundles = parse_bundles(r.certificates_text());
  for (const auto& b : bundles)
    for (const auto& nc : b.certificates) EXPECT_TRUE(replay(nc.certificate)) << nc.check;
}

TEST(LiftedAction, LiftOfUnitaryIsUnitaryTimesZ) {
  const LiftedActionContext ctx(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(4));
  const auto lv = ctx.lift(CrossedElement::unitary_power(ctx.algebra, 1));
  // Each term keeps v in the crossed slot and carries z^{1 + deg E_kl} on the right.
  for (const auto& [k, c] : lv.terms()) {
    EXPECT_EQ(k[0].power, 1);
    EXPECT_EQ(k[1].power, 1 + ctx.algebra->degree(k[0].letters.front()));
  }
}

TEST(LiftedAction, DirectSumWithBlockDelta) {
  const auto r = verify_lifted_action(GradingSpec::make({{0, 1}, {0}}), ZetaMode::root_of_unity(4), SuiteOptions{3, 2}, FunctionalChoice::block_delta);
  EXPECT_TRUE(r.ok());
}
