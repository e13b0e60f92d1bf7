#pragma once

// Sieve-backed arithmetic functions and Ramanujan sums.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ergodic_lab/core.hpp"

namespace elab {

/// Smallest-prime-factor tables from one pass of the linear sieve.
/// Immutable after construction.
struct ArithTables {
  std::uint32_t limit = 0;
  std::vector<std::uint32_t> smallest_prime_factor;  // spf[0] = spf[1] = 0
  std::vector<std::uint32_t> primes;
  std::vector<std::uint32_t> phi;
  std::vector<std::int8_t> mu;

  bool is_prime(std::uint64_t n) const {
    return n >= 2 && n <= limit && smallest_prime_factor[n] == n;
  }

  /// Lambda(n) for n <= limit, natural logarithm.
  double mangoldt(std::uint64_t n) const {
    require(n >= 1 && n <= limit, "ArithTables::mangoldt: n outside table");
    if (n == 1) return 0.0;
    const std::uint32_t p = smallest_prime_factor[n];
    std::uint64_t m = n;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
};

inline ArithTables build_tables(std::uint64_t limit) {
  if (limit < 2 || limit > (1ULL << 31))
    throw invalid_input("build_tables: limit must lie in [2, 2^31], got " + std::to_string(limit));
  ArithTables t;
  t.limit = static_cast<std::uint32_t>(limit);
  const std::size_t n = static_cast<std::size_t>(limit) + 1;
  t.smallest_prime_factor.assign(n, 0);
  t.phi.assign(n, 0);
  t.mu.assign(n, 0);
  t.phi[1] = 1;
  t.mu[1] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.smallest_prime_factor[i] == 0) {
      t.smallest_prime_factor[i] = static_cast<std::uint32_t>(i);
      t.primes.push_back(static_cast<std::uint32_t>(i));
      t.phi[i] = static_cast<std::uint32_t>(i - 1);
      t.mu[i] = -1;
    }
    const std::uint32_t spf_i = t.smallest_prime_factor[i];
    for (std::uint32_t p : t.primes) {
      const std::uint64_t m = i * p;
      if (p > spf_i || m > limit) break;
      t.smallest_prime_factor[m] = p;
      if (p == spf_i) {
        t.phi[m] = t.phi[i] * p;
        t.mu[m] = 0;
      } else {
        t.phi[m] = t.phi[i] * (p - 1);
        t.mu[m] = static_cast<std::int8_t>(-t.mu[i]);
      }
    }
  }
  return t;
}

/// Distinct prime factors of n by trial division.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  auto f = prime_factors(n);
  return f.size() == 1 && f[0] == n;
}

inline std::uint64_t totient(std::uint64_t n) {
  require(n >= 1, "totient: n must be positive");
  std::uint64_t r = n;
  for (auto p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

inline int moebius(std::uint64_t n) {
  require(n >= 1, "moebius: n must be positive");
  int s = 1;
  for (auto p : prime_factors(n)) {
    n /= p;
    if (n % p == 0) return 0;
    s = -s;
  }
  return s;
}

/// von Mangoldt function with natural logarithm.
inline double mangoldt(std::uint64_t n) {
  require(n >= 1, "mangoldt: n must be >= 1");
  if (n == 1) return 0.0;
  auto f = prime_factors(n);
  return f.size() == 1 ? std::log(static_cast<double>(f[0])) : 0.0;
}

/// c_q(n) via the closed form mu(q/g) phi(q) / phi(q/g), g = gcd(n, q).
inline double ramanujan_sum(std::uint64_t q, std::int64_t n) {
  require(q >= 1, "ramanujan_sum: q must be >= 1");
  const std::uint64_t an = static_cast<std::uint64_t>(n < 0 ? -n : n);
  const std::uint64_t g = std::gcd(an, q);  // gcd(0, q) = q
  const std::uint64_t r = q / g;
  const int m = moebius(r);
  if (m == 0) return 0.0;
  return static_cast<double>(m) * static_cast<double>(totient(q) / totient(r));
}

/// Table-backed variant for q <= tables.limit.
inline double ramanujan_sum(const ArithTables& t, std::uint64_t q, std::int64_t n) {
  require(q >= 1 && q <= t.limit, "ramanujan_sum: q outside table");
  const std::uint64_t an = static_cast<std::uint64_t>(n < 0 ? -n : n);
  const std::uint64_t r = q / std::gcd(an, q);
  const int m = t.mu[r];
  if (m == 0) return 0.0;
  return static_cast<double>(m) * static_cast<double>(t.phi[q] / t.phi[r]);
}

/// c_q(n) by summing e(rn/q) over units r; the test oracle for the closed form.
inline cplx ramanujan_sum_brute(std::uint64_t q, std::int64_t n) {
  require(q >= 1, "ramanujan_sum_brute: q must be >= 1");
  CompensatedSum<cplx> acc;
  const auto qq = static_cast<std::int64_t>(q);
  for (std::int64_t r = 1; r <= qq; ++r)
    if (std::gcd(r, qq) == 1) acc.add(e_ratio(static_cast<std::int64_t>((static_cast<i128>(r) * n) % qq), qq));
  return acc.value();
}

}  // namespace elab
