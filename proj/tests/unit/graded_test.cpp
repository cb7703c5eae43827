#include "flatcone/graded.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "flatcone/model_p1.hpp"
#include "generators.hpp"

namespace flatcone {
namespace {

using testing::Rng;

// Closed-form Fubini-Study L^2 Gram: G_ii = i! (k-i)! / (k+1)!.
GradedHermitian BetaNorms() {
  return GradedHermitian([](int k) {
    std::vector<double> diagonal;
    for (int i = 0; i <= k; ++i) diagonal.push_back(std::exp(std::lgamma(i + 1.0) + std::lgamma(k - i + 1.0) - std::lgamma(k + 2.0)));
    return HermitianPiece{HermitianNorm::FromDiagonal(diagonal), Apartment::Standard(k + 1)};
  });
}

GradedNA Weighted(double slope) {
  return GradedNA(
      [slope](int k) {
        std::vector<double> a;
        for (int i = 0; i <= k; ++i) a.push_back(slope * i);
        return NANorm::FromWeights(a);
      },
      1, true);
}

GradedNA Trivial() {
  return GradedNA([](int k) { return NANorm::Trivial(k + 1); }, 1, true);
}

PLFunction Ray(double t) { return PLFunction::Make({0.0, 1.0}, {0.0, -t}); }

TEST(DhMeasureTest, Examples) {
  const DiscreteMeasure trivial = DhMeasureAtK(Trivial(), 4, Normalization::kRaw);
  EXPECT_EQ(trivial.atoms(), std::vector<double>(5, 0.0));
  EXPECT_DOUBLE_EQ(trivial.mass(), 5.0 / 4.0);

  const DiscreteMeasure probability = DhMeasureAtK(Weighted(1.0), 4, Normalization::kProbability);
  EXPECT_EQ(probability.atoms(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  for (double w : probability.weights()) EXPECT_DOUBLE_EQ(w, 0.2);

  const DiscreteMeasure raw = DhMeasureAtK(Weighted(1.0), 4, Normalization::kRaw);
  EXPECT_EQ(raw.atoms(), probability.atoms());
  for (double w : raw.weights()) EXPECT_DOUBLE_EQ(w, 0.25);
  EXPECT_DOUBLE_EQ(raw.mass(), 1.25);

  EXPECT_THROW(DhMeasureAtK(Trivial(), 0, Normalization::kRaw), Error);
}

TEST(DhLimitTest, Examples) {
  std::vector<int> ks;
  for (int k = 10; k <= 100; k += 10) ks.push_back(k);
  const DhLimitEstimate vanishing = EstimateDhLimit(Weighted(1.0), ks);
  EXPECT_LE(KolmogorovDistanceToUniform(vanishing.at_max_k, 0.0, 1.0), 0.01);
  ASSERT_EQ(vanishing.kolmogorov.size(), ks.size() - 1);
  for (std::size_t i = 1; i < vanishing.kolmogorov.size(); ++i) {
    EXPECT_LT(vanishing.kolmogorov[i].value, vanishing.kolmogorov[i - 1].value);
  }

  for (const PerKRecord& r : EstimateDhLimit(Trivial(), ks).kolmogorov) EXPECT_EQ(r.value, 0.0);

  const DhLimitEstimate doubled = EstimateDhLimit(Weighted(2.0), ks);
  EXPECT_LE(KolmogorovDistanceToUniform(doubled.at_max_k, 0.0, 2.0), 0.01);
  EXPECT_DOUBLE_EQ(doubled.at_max_k.support_upper(), 2.0);

  const std::vector<int> empty;
  EXPECT_THROW(EstimateDhLimit(Trivial(), empty), Error);
  const std::vector<int> unsorted{10, 5};
  EXPECT_THROW(EstimateDhLimit(Trivial(), unsorted), Error);
}

TEST(SubmultiplicativityTest, MultiplicativeFiltrationsHaveZeroMargin) {
  const auto ring = p1::MonomialRing();
  const auto vanishing = CheckSubmultiplicativeNA(Weighted(1.0), ring, 3, 5, 50, 1);
  EXPECT_EQ(vanishing.worst_margin, 0.0);
  EXPECT_TRUE(vanishing.holds());
  EXPECT_GT(vanishing.pairs_checked, 24);
  const auto trivial = CheckSubmultiplicativeNA(Trivial(), ring, 4, 4, 50, 2);
  EXPECT_EQ(trivial.worst_margin, 0.0);

  const auto exact = CheckSubmultiplicativeNA(p1::ExactVanishingOrderFiltration(), p1::ExactMonomialRing(), 6, 2, 50, 3);
  EXPECT_TRUE(exact.any_checked);
  EXPECT_EQ(exact.worst_margin, 0);
}

TEST(SubmultiplicativityTest, DetectsViolation) {
  // a_i = -i^2 is not superadditive: z^i z^j has margin -2ij.
  const ExactGradedNA squares(
      [](int k) {
        std::vector<Rational> a;
        for (int i = 0; i <= k; ++i) a.push_back(Rational(-i * i));
        return ExactNANorm(a);
      },
      1);
  const auto report = CheckSubmultiplicativeNA(squares, p1::ExactMonomialRing(), 2, 2, 0, 1);
  EXPECT_FALSE(report.holds());
  EXPECT_EQ(report.worst_margin, Rational(-8));
  EXPECT_FALSE(report.worst_pair.empty());
}

TEST(SubmultiplicativityTest, ModifiedNormsBruteForce) {
  Rng rng(42);
  for (int trial = 0; trial < 3; ++trial) {
    const RationalPLFunction f = testing::RandomRationalConvexDecreasing(rng, 2 + trial);
    const ExactGradedNA modified = ModifyNA(p1::ExactVanishingOrderFiltration(), f);
    const auto report = CheckSubmultiplicativeUpTo(modified, p1::ExactMonomialRing(), 12, 40, 7);
    EXPECT_TRUE(report.holds()) << report.worst_pair;

    const GradedNA approximate = ModifyNA(p1::VanishingOrderFiltration(), f.ToDouble());
    const auto float_report = CheckSubmultiplicativeUpTo(approximate, p1::MonomialRing(), 12, 40, 7);
    EXPECT_TRUE(float_report.holds(1e-9)) << float_report.worst_pair;
  }
}

TEST(BoundedTest, Examples) {
  const std::vector<int> ks{1, 5, 10, 40};
  EXPECT_EQ(CheckBoundedNA(Trivial(), ks), 0.0);
  EXPECT_DOUBLE_EQ(CheckBoundedNA(Weighted(1.0), ks), 1.0);
  EXPECT_DOUBLE_EQ(CheckBoundedNA(Weighted(2.0), ks), 2.0);
}

TEST(ModifyNATest, Examples) {
  const PLFunction zero = PLFunction::Constant(0.0, 1.0, 0.0);
  const GradedNA same = ModifyNA(Weighted(1.0), zero);
  EXPECT_EQ(same.norm(7).values(), Weighted(1.0).norm(7).values());

  const double t = 0.75;
  const GradedNA ray = ModifyNA(Weighted(1.0), Ray(t));
  for (int i = 0; i <= 8; ++i) EXPECT_DOUBLE_EQ(ray.norm(8).values()[i], i * (1.0 + t));

  const PLFunction f = PLFunction::Make({0.0, 0.5, 1.0}, {0.5, 0.125, 0.0});
  EXPECT_EQ(ModifyNA(Weighted(1.0), f).norm(2).values(), (std::vector<double>{-1.0, 0.75, 2.0}));

  const RationalPLFunction exact = RationalPLFunction::Make({0, Rational(1, 2), 1}, {Rational(1, 2), Rational(1, 8), 0});
  EXPECT_EQ(ModifyNA(p1::ExactVanishingOrderFiltration(), exact).norm(2).values(),
            (std::vector<Rational>{-1, Rational(3, 4), 2}));
}

TEST(ModifyNATest, DecreasingRequirement) {
  const PLFunction up = PLFunction::Make({0.0, 1.0}, {0.0, 1.0}, false);
  try {
    ModifyNA(Weighted(1.0), up);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotDecreasing);
  }
  EXPECT_NO_THROW(ModifyNA(Weighted(1.0), up, true));
  const GradedNA plain([](int k) { return NANorm::Trivial(k + 1); }, 1, false);
  EXPECT_THROW(ModifyNA(plain, up, true), Error);
}

TEST(ModifyNATest, ValuesIdentityIsExact) {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const RationalPLFunction f = testing::RandomRationalConvexDecreasing(rng, 3);
    const ExactGradedNA modified = ModifyNA(p1::ExactVanishingOrderFiltration(), f);
    for (int k : {1, 7, 12}) {
      for (int i = 0; i <= k; ++i) {
        const Rational x(i, k);
        EXPECT_EQ(modified.norm(k).values()[i] / k, x - f(x));
      }
    }
  }
}

TEST(ModifyHermitianTest, Examples) {
  const GradedHermitian beta = BetaNorms();
  const GradedHermitian apex = ModifyHermitian(beta, Weighted(1.0), PLFunction::Constant(0.0, 1.0, 0.0));
  for (int k : {1, 6, 30}) {
    EXPECT_LE((apex.norm(k).gram() - beta.norm(k).gram()).cwiseAbs().maxCoeff(), 1e-12 * beta.norm(k).gram().cwiseAbs().maxCoeff());
  }

  const double t = 0.3;
  const GradedHermitian ray = ModifyHermitian(beta, Weighted(1.0), Ray(t));
  for (int i = 0; i <= 9; ++i) {
    EXPECT_NEAR(ray.norm(9).gram()(i, i).real() / beta.norm(9).gram()(i, i).real(), std::exp(-2.0 * t * i), 1e-12);
  }

  const GradedHermitian toy([](int) { return HermitianPiece{HermitianNorm::Euclidean(2), Apartment::Standard(2)}; });
  const GradedNA toy_filtration([](int k) { return NANorm::FromWeights({static_cast<double>(k), 0.0}); }, 1);
  const GradedHermitian toy_modified = ModifyHermitian(toy, toy_filtration, Ray(1.0));
  const HermitianNorm& modified = toy_modified.norm(1);
  EXPECT_NEAR(modified.gram()(0, 0).real(), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(modified.gram()(1, 1).real(), 1.0, 1e-15);
}

TEST(AsymptoticTest, DistanceExamples) {
  const GradedHermitian beta = BetaNorms();
  const std::vector<int> ks{4, 20, 100};
  for (const PerKRecord& r : AsymptoticDp(beta, beta, 2, ks)) EXPECT_NEAR(r.value, 0.0, 1e-15);
  for (const PerKRecord& r : AsymptoticDp(beta, beta.Rescaled(0.4), 3, ks)) EXPECT_NEAR(r.value, 0.4, 1e-12);

  const GradedHermitian modified = ModifyHermitian(beta, Weighted(1.0), Ray(1.0));
  const auto records = AsymptoticDp(beta, modified, 2, ks);
  for (const PerKRecord& r : records) EXPECT_NEAR(r.value, std::sqrt((2.0 * r.k + 1) / (6.0 * r.k)), 1e-12);
  EXPECT_TRUE(std::isnan(records.front().diagnostic));
  EXPECT_NEAR(records[1].diagnostic, records[1].value - records[0].value, 1e-15);
}

TEST(AsymptoticTest, VolumeExamples) {
  const GradedHermitian beta = BetaNorms();
  const std::vector<int> ks{4, 20};
  for (const VolumeRecord& r : AsymptoticVol(beta, beta, ks)) EXPECT_NEAR(r.value, 0.0, 1e-15);
  for (const VolumeRecord& r : AsymptoticVol(beta, beta.Rescaled(-0.25), ks)) EXPECT_NEAR(r.value, -0.25, 1e-12);
  const auto records = AsymptoticVol(beta, ModifyHermitian(beta, Weighted(1.0), Ray(1.0)), ks);
  EXPECT_NEAR(records[0].value, -0.5, 1e-12);
  for (const VolumeRecord& r : records) EXPECT_LE(r.max_identity_residual, 1e-10);
}

TEST(BernsteinMarkovTest, Examples) {
  const GradedHermitian beta = BetaNorms();
  const std::vector<int> ks{10, 20, 40, 80, 160};
  for (const PerKRecord& r : BernsteinMarkovGap(beta, beta, ks)) EXPECT_NEAR(r.value, 0.0, 1e-15);
  for (const PerKRecord& r : BernsteinMarkovGap(beta, beta.Rescaled(std::log(3.0) / 10), ks)) {
    EXPECT_NEAR(r.value, std::log(3.0) / 10, 1e-12);
  }
  const GradedHermitian constant([beta](int k) {
    return HermitianPiece{beta.norm(k).Scaled(2.0), beta.piece(k).basis};
  });
  for (const PerKRecord& r : BernsteinMarkovGap(beta, constant, ks)) EXPECT_NEAR(r.value, std::log(2.0) / r.k, 1e-12);
}

TEST(BernsteinMarkovTest, MixedFubiniStudy) {
  // Sup norms of monomials for the Fubini-Study weight, in closed form.
  const DiagonalLogNorms sup = [](int k) {
    std::vector<double> logs;
    for (int i = 0; i <= k; ++i) {
      const double x = static_cast<double>(i) / k;
      const double entropy = (i == 0 ? 0.0 : x * std::log(x)) + (i == k ? 0.0 : (1 - x) * std::log(1 - x));
      logs.push_back(0.5 * k * entropy);
    }
    return logs;
  };
  const std::vector<int> ks{10, 20, 40, 80, 160, 320};
  const auto gaps = BernsteinMarkovGap(BetaNorms(), sup, ks);
  // Stirling: the worst ratio is attained at i = 0 or k, where it is (1/2) log(k + 1).
  constexpr double kFrozenConstant = 0.5;
  for (const PerKRecord& r : gaps) {
    EXPECT_LE(r.value, (kFrozenConstant + std::log(static_cast<double>(r.k))) / r.k);
    EXPECT_NEAR(r.value, 0.5 * std::log(r.k + 1.0) / r.k, 1e-12);
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) EXPECT_LT(gaps[i].value, gaps[i - 1].value);

  const GradedHermitian skew([](int k) {
    Matrix g = Matrix::Identity(k + 1, k + 1);
    g(0, 1) = g(1, 0) = 0.5;
    return HermitianPiece{HermitianNorm::FromGram(g), Apartment::Standard(k + 1)};
  });
  try {
    BernsteinMarkovGap(skew, sup, ks);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNonDiagonalPair);
  }
}

class IsometryPropertyTest : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(IsometryPropertyTest, PerDegreeIdentity) {
  Rng rng(GetParam());
  const GradedHermitian beta = BetaNorms();
  for (int trial = 0; trial < 4; ++trial) {
    const PLFunction f = testing::RandomConvexDecreasing(rng, 0.0, 1.0, 1 + trial);
    const PLFunction g = testing::RandomConvexDecreasing(rng, 0.0, 1.0, 4 - trial);
    const GradedHermitian mf = ModifyHermitian(beta, Weighted(1.0), f);
    const GradedHermitian mg = ModifyHermitian(beta, Weighted(1.0), g);
    for (int k : {3, 17, 60}) {
      const DiscreteMeasure sigma = DhMeasureAtK(Weighted(1.0), k, Normalization::kProbability);
      for (double p : {1.0, 2.0, 3.0, 6.5}) {
        const double lhs = DpDistance(mf.norm(k), mg.norm(k), p) / k;
        const double rhs = LpDistance(f, g, sigma, p).value;
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, rhs)) << "k=" << k << " p=" << p;
      }
    }
  }
}

TEST_P(IsometryPropertyTest, IdentityWithGenericHermitianNorms) {
  // Non-diagonal norms and a non-monomial filtration basis: the identity
  // only needs the joint basis, not torus invariance.
  Rng rng(GetParam());
  const int k = 6;
  const HermitianNorm n = testing::RandomHermitian(rng, k + 1);
  std::vector<double> a;
  for (int i = 0; i <= k; ++i) a.push_back(i);
  const NANorm filtration = NANorm::FromBasis(testing::RandomBasis(rng, k + 1), a);
  // Small functions: e^{k f} spreads the joint basis norms, which amplifies
  // its rounding-level non-orthogonality.
  const PLFunction f = Scale(testing::RandomConvexDecreasing(rng, 0.0, 1.0, 3), 0.2);
  const PLFunction g = Scale(testing::RandomConvexDecreasing(rng, 0.0, 1.0, 2), 0.2);
  const HermitianNorm mf = ModifyHermitianAt(n, filtration, f, k).norm;
  const HermitianNorm mg = ModifyHermitianAt(n, filtration, g, k).norm;
  std::vector<double> atoms;
  for (double x : a) atoms.push_back(x / k);
  const DiscreteMeasure sigma =
      DiscreteMeasure::Make(atoms, std::vector<double>(atoms.size(), 1.0 / atoms.size()), Normalization::kProbability);
  for (double p : {1.0, 2.0, 3.0}) {
    const double rhs = LpDistance(f, g, sigma, p).value;
    EXPECT_LE(std::abs(DpDistance(mf, mg, p) / k - rhs), 1e-9 * std::max(1.0, rhs));
  }
}

TEST_P(IsometryPropertyTest, RayHasConstantSpeed) {
  const GradedHermitian beta = BetaNorms();
  const PLFunction x = PLFunction::Make({0.0, 1.0}, {0.0, 1.0}, false);
  const PLFunction zero = PLFunction::Constant(0.0, 1.0, 0.0);
  const std::vector<double> ts{0.0, 0.5, 1.0, 2.0};
  const int k = 5 + static_cast<int>(GetParam()) * 13;
  const DiscreteMeasure sigma = DhMeasureAtK(Weighted(1.0), k, Normalization::kProbability);
  for (double s : ts) {
    for (double t : ts) {
      const GradedHermitian ms = ModifyHermitian(beta, Weighted(1.0), Ray(s));
      const GradedHermitian mt = ModifyHermitian(beta, Weighted(1.0), Ray(t));
      for (double p : {1.0, 2.0, 3.0}) {
        const double expected = std::abs(t - s) * LpDistance(x, zero, sigma, p).value;
        EXPECT_LE(std::abs(DpDistance(ms.norm(k), mt.norm(k), p) / k - expected), 1e-10 * std::max(1.0, expected));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, IsometryPropertyTest, ::testing::Values(1u, 2u, 3u));

}  // namespace
}  // namespace flatcone
