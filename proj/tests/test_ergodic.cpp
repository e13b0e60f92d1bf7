#include <gtest/gtest.h>

#include <numbers>

#include "ergodic_lab/ergodic.hpp"
#include "oracles.hpp"

using namespace elab;

namespace {

const PolynomialFamily kLinQuad = PolynomialFamily::parse("n,n^2");
const RotationSystem kSqrt2{std::numbers::sqrt2};

}  // namespace

TEST(TrigPolynomial, ParseEvaluateRoundTrip) {
  const auto f = TrigPolynomial::parse("0:1+1:0.5:-0.5+-3:2");
  EXPECT_EQ(f.terms().size(), 3U);
  EXPECT_EQ(f.mean(), cplx(1.0));
  for (double x : {0.0, 0.125, 0.3, 0.99}) {
    const cplx want = 1.0 + cplx(0.5, -0.5) * oracle::phase(x) + 2.0 * oracle::phase(-3 * x);
    EXPECT_NEAR(std::abs(f(x) - want), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(f(x + 5.0) - f(x)), 0.0, 1e-14);
  }
  const auto g = TrigPolynomial::parse(f.to_string());
  EXPECT_EQ(g.terms(), f.terms());
  EXPECT_THROW(TrigPolynomial::parse("1"), invalid_input);
  EXPECT_THROW(TrigPolynomial::parse("x:1"), invalid_input);
  std::map<std::int64_t, cplx> many;
  for (int m = 0; m < 65; ++m) many[m] = 1.0;
  EXPECT_THROW(TrigPolynomial{many}, invalid_input);
}

TEST(Rotation, ZeroAngleGivesProductAtX) {
  const std::vector<TrigPolynomial> f{TrigPolynomial::parse("1:0.5+0:1"), TrigPolynomial::parse("2:1:1")};
  for (double x : {0.0, 0.2, 0.7}) {
    const auto v = rotation_average(RotationSystem{0.0}, WeightFunction::unit(), kLinQuad, f, 50, x);
    EXPECT_NEAR(std::abs(v - f[0](x) * f[1](x)), 0.0, 1e-14);
  }
}

TEST(Rotation, ConstantObservablesGiveWeightMean) {
  const std::vector<TrigPolynomial> one{TrigPolynomial::constant(1.0), TrigPolynomial::constant(1.0)};
  for (double N : {1.0, 7.0, 1000.0, 4097.5})
    EXPECT_EQ(rotation_average(kSqrt2, WeightFunction::unit(), kLinQuad, one, N, 0.3), cplx(1.0));
  const auto v = rotation_average(kSqrt2, WeightFunction::scale_linked(), kLinQuad, one, 1e6, 0.0);
  EXPECT_NEAR(v.real(), 1.0, 0.01);
  EXPECT_EQ(v.imag(), 0.0);
}

TEST(Rotation, WeylEquidistribution) {
  const std::vector<TrigPolynomial> f{TrigPolynomial::character(1), TrigPolynomial::constant(1.0)};
  EXPECT_LE(std::abs(rotation_average(kSqrt2, WeightFunction::unit(), kLinQuad, f, 1e6, 0.0)), 0.01);
}

TEST(Rotation, MatchesDirectSum) {
  const std::vector<TrigPolynomial> f{TrigPolynomial::parse("1:1+2:0.5"), TrigPolynomial::parse("-1:1:0.25")};
  const double alpha = 0.1234567, x = 0.41;
  const auto w = WeightFunction::cramer(5);
  cplx want = 0.0;
  for (std::int64_t n = 1; n <= 500; ++n) {
    const long double a1 = static_cast<long double>(alpha) * n, a2 = static_cast<long double>(alpha) * n * n;
    const double p1 = static_cast<double>(a1 - std::floor(a1)), p2 = static_cast<double>(a2 - std::floor(a2));
    const cplx f1 = oracle::phase(x + p1) + 0.5 * oracle::phase(2 * (x + p1));
    const cplx f2 = cplx(1.0, 0.25) * oracle::phase(-(x + p2));
    want += oracle::cramer(n, 5) * f1 * f2;
  }
  want /= 500.0;
  EXPECT_NEAR(std::abs(rotation_average(RotationSystem{alpha}, w, kLinQuad, f, 500, x) - want), 0.0, 1e-11);
}

TEST(Rotation, PeriodicInX) {
  const std::vector<TrigPolynomial> f{TrigPolynomial::parse("1:1+3:0.5"), TrigPolynomial::character(2)};
  for (double x : {0.25, 0.625})
    for (double m : {1.0, 3.0, -2.0})
      EXPECT_EQ(rotation_average(kSqrt2, WeightFunction::von_mangoldt(), kLinQuad, f, 2000, x),
                rotation_average(kSqrt2, WeightFunction::von_mangoldt(), kLinQuad, f, 2000, x + m));
}

TEST(Rotation, NearRationalFlag) {
  EXPECT_TRUE(RotationSystem{0.0}.near_rational());
  EXPECT_TRUE(RotationSystem{0.25}.near_rational());
  EXPECT_TRUE(RotationSystem{1.0 / 7.0}.near_rational());
  EXPECT_FALSE(kSqrt2.near_rational());
}

TEST(Convergence, ConstantObservablesTrackWeightMean) {
  const std::vector<TrigPolynomial> one{TrigPolynomial::constant(1.0), TrigPolynomial::constant(1.0)};
  const auto w = WeightFunction::scale_linked();
  const auto rep = convergence_series(kSqrt2, w, kLinQuad, one, LacunarySet::geometric(64, 2, 6), 0.0);
  ASSERT_EQ(rep.rows.size(), 6U);
  EXPECT_EQ(rep.limit, cplx(1.0));
  EXPECT_FALSE(rep.limit_unreliable);
  for (const auto& r : rep.rows) {
    const auto st = weight_statistics(w, static_cast<std::uint64_t>(r.N), std::nullopt, std::nullopt, std::nullopt, r.N);
    EXPECT_NEAR(r.deviation, std::abs(st.mean - 1.0), 1e-12) << r.N;
  }
}

TEST(Convergence, CharacterDeviationDecays) {
  const std::vector<TrigPolynomial> f{TrigPolynomial::character(1), TrigPolynomial::constant(1.0)};
  const auto rep =
      convergence_series(kSqrt2, WeightFunction::scale_linked(), kLinQuad, f, LacunarySet::geometric(1024, 2, 11), 0.0);
  EXPECT_EQ(rep.limit, cplx(0.0));
  EXPECT_LT(rep.rows.back().deviation, rep.rows.front().deviation);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) EXPECT_GE(rep.rows[i].v2_so_far, rep.rows[i - 1].v2_so_far);
  EXPECT_TRUE(std::isfinite(rep.rows.back().v2_so_far));
}

TEST(Convergence, RationalAngleFlagged) {
  const std::vector<TrigPolynomial> f{TrigPolynomial::character(1), TrigPolynomial::character(1)};
  const auto rep = convergence_series(RotationSystem{0.0}, WeightFunction::unit(), kLinQuad, f,
                                      LacunarySet::geometric(16, 2, 3), 0.0);
  EXPECT_TRUE(rep.limit_unreliable);
  EXPECT_THROW(convergence_series(kSqrt2, WeightFunction::unit(), kLinQuad, f, LacunarySet({2, 2.5}, 1.2), 0.0),
               invalid_input);
  EXPECT_THROW(convergence_series(kSqrt2, WeightFunction::unit(), kLinQuad, {f[0]}, LacunarySet::geometric(16, 2, 3), 0.0),
               invalid_input);
}

TEST(PrimeGap, HandValueAtTen) {
  const std::vector<TrigPolynomial> one{TrigPolynomial::constant(1.0), TrigPolynomial::constant(1.0)};
  const double want = std::abs(4.0 * std::log(10.0) / 10.0 - std::log(2520.0) / 10.0);
  EXPECT_NEAR(prime_vs_mangoldt_gap(kSqrt2, kLinQuad, one, 10, 0.0), want, 1e-14);
  EXPECT_THROW(prime_vs_mangoldt_gap(kSqrt2, kLinQuad, one, 9, 0.0), invalid_input);
}

TEST(PrimeGap, ChebyshevTypeGap) {
  const std::vector<TrigPolynomial> one{TrigPolynomial::constant(1.0), TrigPolynomial::constant(1.0)};
  EXPECT_LE(prime_vs_mangoldt_gap(kSqrt2, kLinQuad, one, 1e5, 0.0), 0.3);
  EXPECT_LT(prime_vs_mangoldt_gap(kSqrt2, kLinQuad, one, 1e6, 0.0), prime_vs_mangoldt_gap(kSqrt2, kLinQuad, one, 1e3, 0.0));
}
