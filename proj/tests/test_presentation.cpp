#include "qaut/presentation.hpp"
#include "support/model.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace qaut;
using qaut_test::adjoint;
using qaut_test::mixing_unitary;
using qaut_test::OrbitModel;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream f(std::string(QAUT_GOLDEN_DIR) + "/" + name, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// The cond3 instance with the first factor twisted by d_s (as opposed to d_m).
FreeElement cond3_with_source_twist(const Presentation& p, const std::vector<int>& d, int i, int j, int k, int l, int s, int m) {
  auto deg = [&](int a, int b, int c, int e) { return d[c] - d[a] + d[b] - d[e]; };
  const int n = static_cast<int>(d.size());
  FreeElement e;
  for (int t = 0; t < n; ++t)
    add_to(e, Word{0, {p.at(i, s, k, t), p.at(m, j, t, l)}}, phase(d[s] * deg(i, s, k, t) + d[j] * deg(m, j, t, l), p.mode));
  if (s == m) add_to(e, Word{0, {p.at(i, j, k, l)}}, -phase(d[j] * deg(i, j, k, l), p.mode));
  return e;
}

}  // namespace

TEST(Presentation, GeneratorCountsAndDegrees) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1, 2}), ZetaMode::generic());
  EXPECT_EQ(p->letter_count(), 81u);
  const auto& g = p->generator(p->u(1, 2, 3, 1));
  EXPECT_EQ(g.degree, 2 - 0 + 1 - 0);
  // Sum over block pairs of n_x^2 n_y^2.
  EXPECT_EQ(gen_braided_aut(GradingSpec::make({{0, 1}, {0}}), ZetaMode::generic())->letter_count(), 25u);
  EXPECT_EQ(gen_braided_aut(GradingSpec::make({{0}, {0}, {0}}), ZetaMode::generic())->letter_count(), 9u);
}

TEST(Presentation, RelationCountsAfterMerging) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::generic());
  EXPECT_EQ(p->relations.size(), 136u);
  std::size_t instances = 0;
  for (const auto& r : p->relations) instances += r.instances.size();
  // cond2 and cond3 have n^6 instances each, cond5 and cond6 n^2 each.
  EXPECT_EQ(instances, 2u * 64 + 2u * 4);
  EXPECT_EQ(p->raw_instance_counts.at("cond4"), 16u);
  EXPECT_EQ(gen_braided_aut(GradingSpec::make({{0}, {0}, {0}}), ZetaMode::generic())->relations.size(), 51u);
}

TEST(Presentation, LetterNamesRoundTrip) {
  const auto p = gen_braided_aut(GradingSpec::make({{0, 1}, {0}}), ZetaMode::generic());
  for (Letter g = 0; g < p->letter_count(); ++g) {
    const auto back = p->parse_letter(p->letter_name(g));
    ASSERT_TRUE(back.has_value()) << p->letter_name(g);
    EXPECT_EQ(*back, g);
  }
}

TEST(Presentation, StarLetterIsAnInvolution) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1, 3}), ZetaMode::root_of_unity(8));
  for (Letter g = 0; g < p->letter_count(); ++g) {
    const auto& gen = p->generator(g);
    const auto& back = p->generator(gen.star_letter);
    EXPECT_EQ(back.star_letter, g);
    EXPECT_TRUE((phase(gen.star_exponent, p->mode) * phase(back.star_exponent, p->mode).star()).is_one());
    EXPECT_EQ(back.degree, -gen.degree);
  }
}

class OrbitModelRelations : public ::testing::TestWithParam<std::vector<int>> {};

TEST_P(OrbitModelRelations, EveryGeneratedRelationVanishes) {
  const auto d = GetParam();
  const auto mode = ZetaMode::root_of_unity(8);
  const OrbitModel model(d, mode, mixing_unitary(static_cast<int>(d.size()), mode));
  const auto p = gen_braided_aut(GradingSpec::single(d), mode);
  for (const auto& r : p->relations) EXPECT_TRUE(model.evaluate(*p, r.element).is_zero()) << r.instances.front();
}

TEST_P(OrbitModelRelations, TwistAndStarRulesHold) {
  const auto d = GetParam();
  const auto mode = ZetaMode::root_of_unity(8);
  const OrbitModel model(d, mode, mixing_unitary(static_cast<int>(d.size()), mode));
  const auto p = gen_braided_aut(GradingSpec::single(d), mode);
  for (Letter g = 0; g < p->letter_count(); ++g) {
    const auto& gen = p->generator(g);
    const auto ug = model.u(gen.i, gen.j, gen.k, gen.l);
    EXPECT_EQ(model.v() * ug * adjoint(model.v()), ug.scaled(phase(-gen.degree, mode)));
    const auto& sg = p->generator(gen.star_letter);
    EXPECT_EQ(adjoint(ug), model.u(sg.i, sg.j, sg.k, sg.l).scaled(phase(gen.star_exponent, mode)));
  }
}

TEST_P(OrbitModelRelations, SourceTwistedAntipodeRelationFailsOffDiagonal) {
  const auto d = GetParam();
  const int n = static_cast<int>(d.size());
  const auto mode = ZetaMode::root_of_unity(8);
  const OrbitModel model(d, mode, mixing_unitary(n, mode));
  const auto p = gen_braided_aut(GradingSpec::single(d), mode);
  int nonzero = 0, total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s)
            for (int m = 0; m < n; ++m) {
              const bool vanishes = model.evaluate(*p, cond3_with_source_twist(*p, d, i, j, k, l, s, m)).is_zero();
              EXPECT_TRUE(vanishes || s != m);
              ++total;
              if (!vanishes) ++nonzero;
            }
  // Counts measured by evaluating in this model; all failures are off-diagonal.
  const std::pair<int, int> expected = n == 2 ? std::pair{32, 64} : std::pair{384, 729};
  EXPECT_EQ(std::pair(nonzero, total), expected);
}

INSTANTIATE_TEST_SUITE_P(Gradings, OrbitModelRelations, ::testing::Values(std::vector<int>{0, 1}, std::vector<int>{0, 1, 2}));

TEST(Presentation, SourceTwistAgreesForTrivialGrading) {
  const std::vector<int> d{0, 0};
  const auto mode = ZetaMode::root_of_unity(8);
  const OrbitModel model(d, mode, mixing_unitary(2, mode));
  const auto p = gen_braided_aut(GradingSpec::single(d), mode);
  for (int s = 0; s < 2; ++s)
    for (int m = 0; m < 2; ++m) EXPECT_TRUE(model.evaluate(*p, cond3_with_source_twist(*p, d, 0, 1, 1, 0, s, m)).is_zero());
}

TEST(Presentation, BosonisedAndQisoShapes) {
  const auto braided = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(4));
  const auto bos = gen_bosonisation(*braided);
  EXPECT_EQ(bos->kind, PresentationKind::bosonised);
  EXPECT_EQ(bos->unitary_name(), 'z');
  EXPECT_EQ(bos->relations.size(), braided->relations.size());
  // Right factors pick up z^{deg} of the left factor.
  for (std::size_t g = 0; g < bos->coproduct.size(); ++g)
    for (const auto& t : bos->coproduct[g]) EXPECT_EQ(t.right.power, bos->word_degree(t.left));
  EXPECT_THROW(gen_bosonisation(*bos), std::invalid_argument);

  const auto qiso = gen_qiso_crossed(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(4));
  EXPECT_EQ(qiso->unitary_name(), 'v');
  EXPECT_EQ(qiso->letter_name(0).front(), 'q');
  EXPECT_THROW(gen_qiso_crossed(GradingSpec::make({{0, 1}, {0}}), ZetaMode::generic()), SpecError);
}

TEST(Presentation, WangRelationsHoldOnClassicalPoints) {
  const auto mode = ZetaMode::root_of_unity(8);
  const OrbitModel model({0, 0}, mode, mixing_unitary(2, mode));
  const auto p = gen_wang(2, mode);
  for (const auto& r : p->relations) EXPECT_TRUE(model.evaluate(*p, r.element).is_zero()) << r.instances.front();
}

TEST(Presentation, DumpMatchesGoldenFile) {
  const auto p = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::root_of_unity(4));
  const std::string golden = read_golden("presentation_n2_d01_root4.txt");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(p->dump(), golden);
}

TEST(Presentation, DumpRecordsDegreePermutation) {
  const auto p = gen_braided_aut(GradingSpec::single({1, 0}), ZetaMode::generic());
  EXPECT_NE(p->dump().find("degree-permutation [2 1]"), std::string::npos);
}

TEST(Presentation, HashIsStableAndSensitive) {
  const auto a = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::generic());
  const auto b = gen_braided_aut(GradingSpec::single({0, 1}), ZetaMode::generic());
  const auto c = gen_braided_aut(GradingSpec::single({0, 2}), ZetaMode::generic());
  EXPECT_EQ(presentation_hash(*a), presentation_hash(*b));
  EXPECT_NE(presentation_hash(*a), presentation_hash(*c));
  EXPECT_EQ(presentation_hash(*a).size(), 16u);
}
