#include <gtest/gtest.h>

#include <cmath>

#include "ergodic_lab/approximants.hpp"
#include "oracles.hpp"

using namespace elab;

TEST(Cramer, Examples) {
  EXPECT_DOUBLE_EQ(cramer_weight(5, 3), 3.0);
  EXPECT_EQ(cramer_weight(9, 3), 0.0);
  EXPECT_DOUBLE_EQ(cramer_weight(11, 5), 3.75);
  EXPECT_EQ(cramer_weight(7, 1), 0.0);
}

TEST(Cramer, PrimeByPrimePathForLargeOmega) {
  EXPECT_THROW(primorial(64), invalid_input);
  for (std::uint64_t n : {1ULL, 53ULL, 59ULL, 61ULL, 67ULL, 4757ULL, 67ULL * 71ULL})
    EXPECT_NEAR(cramer_weight(n, 64), oracle::cramer(static_cast<std::int64_t>(n), 64), 1e-12) << n;
}

TEST(Cramer, BoundedAndMatchesOracle) {
  for (int omega : {2, 3, 5, 7, 11, 20}) {
    const auto w = WeightFunction::cramer(omega);
    const auto t = w.table(1, 3000);
    for (std::int64_t n = 1; n <= 3000; ++n) {
      const double v = t[static_cast<std::size_t>(n - 1)];
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, cramer_prefactor(omega) + 1e-12);
      EXPECT_NEAR(v, oracle::cramer(n, omega), 1e-12);
      EXPECT_EQ(v, w(static_cast<std::uint64_t>(n)));
    }
  }
}

TEST(Cramer, FullPeriodMeanIsOne) {
  for (double omega : {2.0, 3.0, 5.0, 7.0, 11.0}) {
    const auto W = primorial(omega);
    const auto t = WeightFunction::cramer(omega).table(1, W);
    double s = 0.0;
    for (double v : t) s += v;
    EXPECT_NEAR(s / static_cast<double>(W), 1.0, 1e-12) << omega;
  }
}

TEST(HeathBrown, SmallOmega) {
  for (std::uint64_t n = 1; n <= 200; ++n) {
    EXPECT_NEAR(heath_brown_weight(n, 2), 1.0, 1e-15);
    EXPECT_NEAR(heath_brown_weight(n, 3), n % 2 ? 2.0 : 0.0, 1e-15);
  }
  EXPECT_EQ(heath_brown_weight(4, 3, 0.0), 0.0);
  EXPECT_EQ(heath_brown_weight(4, 3, 5.0), 0.0);
}

TEST(HeathBrown, TableMatchesOracle) {
  for (double omega : {4.0, 7.5, 16.0}) {
    const auto t = WeightFunction::heath_brown(omega).table(1, 400);
    for (std::int64_t n = 1; n <= 400; ++n)
      EXPECT_NEAR(t[static_cast<std::size_t>(n - 1)], oracle::heath_brown(n, omega), 1e-10) << omega << " " << n;
  }
}

TEST(HeathBrown, TruncationZeroesLargeValues) {
  const double omega = 16.0, eps = 1.0, c = 0.5;
  const double thr = std::pow(omega, c * eps);
  const auto full = WeightFunction::heath_brown(omega).table(1, 500);
  const auto cut = WeightFunction::heath_brown_truncated(omega, eps, c).table(1, 500);
  for (std::size_t i = 0; i < full.size(); ++i) EXPECT_EQ(cut[i], std::abs(full[i]) > thr ? 0.0 : full[i]);
}

TEST(ScaleLinked, Examples) {
  EXPECT_NEAR(scale_linked_omega(65536, 4), std::exp(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(scale_linked_cramer(11, 65536, 4), 210.0 / 48.0);
  EXPECT_DOUBLE_EQ(scale_linked_cramer(11, 65536, 4), cramer_weight(11, std::exp(2.0)));
  EXPECT_EQ(scale_linked_cramer(6, 65536, 4), 0.0);
  EXPECT_DOUBLE_EQ(scale_linked_cramer(3, 4, 100), 2.0);
  const auto w = WeightFunction::scale_linked();
  EXPECT_DOUBLE_EQ(w(11, 65536), 4.375);
}

TEST(WeightFunction, UnitDifferenceAndParse) {
  const auto d = WeightFunction::difference(WeightFunction::cramer(5), WeightFunction::unit());
  for (std::uint64_t n = 1; n <= 60; ++n) EXPECT_DOUBLE_EQ(d(n), cramer_weight(n, 5) - 1.0);
  for (const char* s : {"unit", "mangoldt", "cramer:5", "hb:16", "hbt:16:0.5", "hbt:16:0.5:0.2", "lambdaN", "lambdaN:6",
                        "diff(cramer:5,hb:3)"}) {
    const auto w = WeightFunction::parse(s);
    const auto again = WeightFunction::parse(w.to_string());
    EXPECT_EQ(w.table(1, 100, 1000), again.table(1, 100, 1000)) << s;
  }
  EXPECT_THROW(WeightFunction::parse("cramer"), invalid_input);
  EXPECT_THROW(WeightFunction::parse("bogus:1"), invalid_input);
  EXPECT_THROW(WeightFunction::cramer(0.5), invalid_input);
}

TEST(WeightFunction, TableMatchesPointwise) {
  for (const char* s : {"mangoldt", "hb:10", "lambdaN", "diff(mangoldt,lambdaN)"}) {
    const auto w = WeightFunction::parse(s);
    const auto t = w.table(500, 900, 5000);
    for (std::uint64_t n = 500; n <= 900; ++n) EXPECT_NEAR(t[n - 500], w(n, 5000), 1e-12) << s << " " << n;
  }
}

TEST(WeightStatistics, Examples) {
  const auto c3 = WeightFunction::cramer(3);
  EXPECT_DOUBLE_EQ(weight_statistics(c3, 6).mean, 1.0);
  EXPECT_DOUBLE_EQ(*weight_statistics(c3, 6, 2, 1).residue_mean, 1.0);
  EXPECT_DOUBLE_EQ(*weight_statistics(c3, 6, 2, 1).residue_target, 1.0);
  EXPECT_DOUBLE_EQ(*weight_statistics(WeightFunction::heath_brown(3), 4, std::nullopt, std::nullopt, 2).moment, 2.0);
  EXPECT_THROW(weight_statistics(c3, 6, std::nullopt, std::nullopt, 9), invalid_input);
  EXPECT_THROW(weight_statistics(c3, 6, 4, 5), invalid_input);
}

TEST(WeightStatistics, CramerMeansAtDeskScale) {
  for (double omega : {5.0, 11.0, 20.0}) {
    const auto w = WeightFunction::cramer(omega);
    EXPECT_NEAR(weight_statistics(w, 1000000).mean, 1.0, 0.01);
    for (std::uint64_t q : {2, 3, 4, 5})
      for (std::uint64_t b = 1; b <= q; ++b) {
        const auto st = weight_statistics(w, 200000, q, b);
        EXPECT_NEAR(*st.residue_mean, *st.residue_target, 0.01) << omega << " " << q << " " << b;
      }
  }
}

TEST(WeightStatistics, HeathBrownMomentBound) {
  // frozen constant: pilot ratios moment / bound stayed below 0.12
  constexpr double kMomentConstant = 32.0;
  for (double omega : {4.0, 8.0, 16.0, 32.0})
    for (int k = 1; k <= 3; ++k) {
      const auto st = weight_statistics(WeightFunction::heath_brown(omega), 100000, std::nullopt, std::nullopt, k);
      EXPECT_LE(*st.moment, kMomentConstant * *st.moment_bound) << omega << " " << k;
    }
}
