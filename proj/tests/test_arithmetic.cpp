#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ergodic_lab/arithmetic.hpp"
#include "oracles.hpp"

using namespace elab;

TEST(BuildTables, SmallExamples) {
  const auto t10 = build_tables(10);
  EXPECT_EQ(t10.primes, (std::vector<std::uint32_t>{2, 3, 5, 7}));
  EXPECT_EQ(build_tables(12).phi[12], 4U);
  EXPECT_EQ(build_tables(30).mu[30], -1);
}

TEST(BuildTables, RejectsOutOfRange) {
  EXPECT_THROW(build_tables(1), invalid_input);
  EXPECT_THROW(build_tables((std::uint64_t{1} << 31) + 1), invalid_input);
}

TEST(BuildTables, AgreesWithTrialDivision) {
  const auto t = build_tables(3000);
  for (std::int64_t n = 1; n <= 3000; ++n) {
    const auto i = static_cast<std::size_t>(n);
    EXPECT_EQ(static_cast<std::int64_t>(t.phi[i]), oracle::phi(n)) << n;
    EXPECT_EQ(t.mu[i], oracle::mu(n)) << n;
    EXPECT_EQ(t.is_prime(static_cast<std::uint64_t>(n)), oracle::is_prime(n)) << n;
    EXPECT_NEAR(t.mangoldt(static_cast<std::uint64_t>(n)), oracle::mangoldt(n), 1e-15) << n;
  }
}

TEST(BuildTables, Invariants) {
  const auto t = build_tables(10000);
  for (std::size_t n = 2; n <= 10000; ++n) EXPECT_EQ(n % t.smallest_prime_factor[n], 0U);
  for (auto p : t.primes) {
    EXPECT_EQ(t.phi[p], p - 1);
    EXPECT_EQ(t.mu[p], -1);
  }
  // sum_{d | n} phi(d) = n
  std::vector<std::uint64_t> acc(10001, 0);
  for (std::size_t d = 1; d <= 10000; ++d)
    for (std::size_t m = d; m <= 10000; m += d) acc[m] += t.phi[d];
  for (std::size_t n = 1; n <= 10000; ++n) EXPECT_EQ(acc[n], n);
}

TEST(Mangoldt, Examples) {
  EXPECT_EQ(mangoldt(1), 0.0);
  EXPECT_DOUBLE_EQ(mangoldt(8), std::log(2.0));
  EXPECT_EQ(mangoldt(6), 0.0);
  EXPECT_THROW(mangoldt(0), invalid_input);
}

TEST(Mangoldt, ChebyshevMeanNearOne) {
  const auto t = build_tables(1000000);
  double s = 0.0;
  for (std::uint64_t n = 1; n <= 1000000; ++n) s += t.mangoldt(n);
  EXPECT_GE(s / 1e6, 0.8);
  EXPECT_LE(s / 1e6, 1.2);
}

TEST(RamanujanSum, Examples) {
  for (std::int64_t n = -5; n <= 5; ++n) EXPECT_EQ(ramanujan_sum(1, n), 1.0);
  EXPECT_EQ(ramanujan_sum(6, 3), -2.0);
  EXPECT_EQ(ramanujan_sum(4, 2), -2.0);
}

TEST(RamanujanSum, ClosedFormMatchesOracle) {
  const auto t = build_tables(200);
  for (std::int64_t q = 1; q <= 200; q += 7)
    for (std::int64_t n = -200; n <= 200; n += 3) {
      const double ref = oracle::ramanujan(q, n);
      EXPECT_NEAR(ramanujan_sum(static_cast<std::uint64_t>(q), n), ref, 1e-9);
      EXPECT_NEAR(ramanujan_sum(t, static_cast<std::uint64_t>(q), n), ref, 1e-9);
      EXPECT_NEAR(ramanujan_sum_brute(static_cast<std::uint64_t>(q), n).real(), ref, 1e-9);
      EXPECT_NEAR(ramanujan_sum_brute(static_cast<std::uint64_t>(q), n).imag(), 0.0, 1e-9);
    }
}

TEST(RamanujanSum, Multiplicative) {
  for (std::uint64_t q = 1; q <= 60; ++q)
    for (std::uint64_t r = 1; r <= 60; ++r) {
      if (std::gcd(q, r) != 1) continue;
      for (std::int64_t n : {0, 1, 2, 6, 12, 30, 35, -42, 97})
        EXPECT_EQ(ramanujan_sum(q * r, n), ramanujan_sum(q, n) * ramanujan_sum(r, n)) << q << " " << r << " " << n;
    }
}
