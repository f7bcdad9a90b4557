#include "qaut/scalar.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <random>

using qaut::Scalar;
using qaut::ZetaMode;

namespace {

// Floating-point evaluation at exp(2 pi i / N); independent of the exact arithmetic.
std::complex<double> evaluate(const Scalar& s, int order) {
  const std::complex<double> z = std::polar(1.0, 2 * std::numbers::pi / order);
  auto eval_poly = [&](const qaut::poly::Poly& p) {
    std::complex<double> acc = 0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + p[k].get_d();
    return acc;
  };
  std::complex<double> num = eval_poly(s.numerator()) * std::pow(z, static_cast<double>(s.shift()));
  if (s.has_denominator()) num /= eval_poly(s.denominator());
  return num;
}

bool close(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; }

Scalar random_scalar(std::mt19937& rng, ZetaMode mode, int terms = 3) {
  std::uniform_int_distribution<int> coef(-4, 4), expo(-6, 6);
  Scalar s;
  for (int t = 0; t < terms; ++t) s += Scalar(coef(rng)) * qaut::phase(expo(rng), mode);
  return s;
}

}  // namespace

TEST(Scalars, PhaseExponentsAdd) {
  for (ZetaMode mode : {ZetaMode::generic(), ZetaMode::root_of_unity(4), ZetaMode::root_of_unity(8), ZetaMode::root_of_unity(5)})
    for (int a = -7; a <= 7; ++a)
      for (int b = -7; b <= 7; ++b) EXPECT_EQ(qaut::phase(a, mode) * qaut::phase(b, mode), qaut::phase(a + b, mode)) << mode.to_string();
}

TEST(Scalars, RootOfUnityIdentities) {
  const auto i4 = ZetaMode::root_of_unity(4);
  EXPECT_EQ(qaut::phase(2, i4), Scalar(-1));
  EXPECT_TRUE(qaut::phase(4, i4).is_one());
  const auto z8 = ZetaMode::root_of_unity(8);
  const Scalar sqrt2 = qaut::phase(1, z8) + qaut::phase(-1, z8);
  EXPECT_EQ(sqrt2 * sqrt2, Scalar(2));
  const auto z3 = ZetaMode::root_of_unity(3);
  EXPECT_TRUE((Scalar(1) + qaut::phase(1, z3) + qaut::phase(2, z3)).is_zero());
  // Root 1 collapses every phase to 1.
  EXPECT_TRUE(qaut::phase(17, ZetaMode::root_of_unity(1)).is_one());
}

TEST(Scalars, GenericPhasesAreIndependent) {
  const auto g = ZetaMode::generic();
  EXPECT_FALSE((qaut::phase(2, g) + Scalar(1)).is_zero());
  EXPECT_FALSE((qaut::phase(4, g) - Scalar(1)).is_zero());
  EXPECT_TRUE(qaut::phase(3, g).is_monomial());
}

TEST(Scalars, RMatrixIsInversePhaseOfProduct) {
  const auto z8 = ZetaMode::root_of_unity(8);
  EXPECT_EQ(qaut::r_matrix(2, 3, z8), qaut::phase(-6, z8));
  EXPECT_EQ(qaut::r_matrix(-1, 2, z8) * qaut::r_matrix(1, 2, z8), Scalar(1));
}

TEST(Scalars, RationalsAreModeFree) {
  const auto z8 = ZetaMode::root_of_unity(8);
  const Scalar half = Scalar::rational(1, 2);
  EXPECT_TRUE(half.is_rational());
  EXPECT_EQ((half * qaut::phase(1, z8)) * Scalar(2), qaut::phase(1, z8));
  EXPECT_EQ(Scalar::rational(2, 4), half);
}

TEST(Scalars, InverseProperty) {
  std::mt19937 rng(7);
  for (ZetaMode mode : {ZetaMode::root_of_unity(8), ZetaMode::root_of_unity(12), ZetaMode::generic()}) {
    for (int trial = 0; trial < 40; ++trial) {
      const Scalar s = random_scalar(rng, mode);
      if (s.is_zero()) continue;
      EXPECT_TRUE((s * s.inverse()).is_one()) << s.to_string() << " in " << mode.to_string();
    }
  }
  EXPECT_THROW(Scalar().inverse(), qaut::ScalarError);
}

TEST(Scalars, StarIsConjugateLinearAntiMultiplicativeInvolution) {
  std::mt19937 rng(11);
  for (ZetaMode mode : {ZetaMode::root_of_unity(8), ZetaMode::generic()}) {
    for (int trial = 0; trial < 40; ++trial) {
      const Scalar a = random_scalar(rng, mode), b = random_scalar(rng, mode);
      EXPECT_EQ(a.star().star(), a);
      EXPECT_EQ((a * b).star(), a.star() * b.star());
      EXPECT_EQ((a + b).star(), a.star() + b.star());
    }
    EXPECT_EQ(qaut::phase(3, mode).star(), qaut::phase(-3, mode));
  }
}

TEST(Scalars, RingAxiomsOnRandomElements) {
  std::mt19937 rng(3);
  for (ZetaMode mode : {ZetaMode::root_of_unity(8), ZetaMode::root_of_unity(9), ZetaMode::generic()}) {
    for (int trial = 0; trial < 30; ++trial) {
      const Scalar a = random_scalar(rng, mode), b = random_scalar(rng, mode), c = random_scalar(rng, mode);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a * b, b * a);
      EXPECT_TRUE((a - a).is_zero());
    }
  }
}

TEST(Scalars, AgreesWithFloatingPointEvaluation) {
  std::mt19937 rng(5);
  for (int order : {4, 8, 12}) {
    const auto mode = ZetaMode::root_of_unity(order);
    for (int trial = 0; trial < 30; ++trial) {
      const Scalar a = random_scalar(rng, mode), b = random_scalar(rng, mode);
      EXPECT_TRUE(close(evaluate(a * b, order), evaluate(a, order) * evaluate(b, order)));
      EXPECT_TRUE(close(evaluate(a + b, order), evaluate(a, order) + evaluate(b, order)));
      EXPECT_TRUE(close(evaluate(a.star(), order), std::conj(evaluate(a, order))));
      if (!a.is_zero()) {
        EXPECT_TRUE(close(evaluate(a.inverse(), order), 1.0 / evaluate(a, order)));
      }
    }
  }
}

TEST(Scalars, SpecializationIsARingHomomorphism) {
  std::mt19937 rng(13);
  const auto g = ZetaMode::generic();
  for (int order : {4, 8}) {
    const auto target = ZetaMode::root_of_unity(order);
    for (int trial = 0; trial < 40; ++trial) {
      const Scalar a = random_scalar(rng, g), b = random_scalar(rng, g);
      EXPECT_EQ((a * b).specialize(target), a.specialize(target) * b.specialize(target));
      EXPECT_EQ((a + b).specialize(target), a.specialize(target) + b.specialize(target));
      EXPECT_TRUE(close(evaluate(a.specialize(target), order), evaluate(a, order)));
    }
  }
}

TEST(Scalars, GenericQuotientsSpecializeWhenDefined) {
  const auto g = ZetaMode::generic();
  const Scalar q = (Scalar(1) + qaut::phase(1, g)).inverse();
  const auto r8 = ZetaMode::root_of_unity(8);
  EXPECT_TRUE((q.specialize(r8) * (Scalar(1) + qaut::phase(1, r8))).is_one());
  // 1 + zeta vanishes at zeta = -1.
  EXPECT_THROW(q.specialize(ZetaMode::root_of_unity(2)), qaut::ScalarError);
}

TEST(Scalars, TextRoundTrip) {
  std::mt19937 rng(17);
  for (ZetaMode mode : {ZetaMode::root_of_unity(8), ZetaMode::generic()}) {
    for (int trial = 0; trial < 30; ++trial) {
      const Scalar a = random_scalar(rng, mode);
      EXPECT_EQ(Scalar::parse(a.to_string(), mode), a) << a.to_string();
    }
    const Scalar q = (Scalar(2) + qaut::phase(1, mode)).inverse();
    EXPECT_EQ(Scalar::parse(q.to_string(), mode), q) << q.to_string();
  }
}

TEST(Scalars, ModeToString) {
  EXPECT_EQ(ZetaMode::generic().to_string(), "generic");
  EXPECT_EQ(ZetaMode::root_of_unity(8).to_string(), "root 8");
  EXPECT_THROW(ZetaMode::root_of_unity(0), std::invalid_argument);
}
