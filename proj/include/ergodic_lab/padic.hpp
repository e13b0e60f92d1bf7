#pragma once

// Finite-group shadows of the p-adic averages: E over the units of Z/QZ,
// character eigenvalues of the linear unit average on Z/p^jZ, fiber counts
// h(m) = #{n : P(n) = m} and a seeded lower-bound reporter for the
// L^2 -> L^{2s} norm.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ergodic_lab/arithmetic.hpp"
#include "ergodic_lab/core.hpp"
#include "ergodic_lab/cyclic.hpp"
#include "ergodic_lab/fft.hpp"
#include "ergodic_lab/polynomial.hpp"

namespace elab {

inline std::vector<std::int64_t> unit_residues(std::int64_t Q) {
  std::vector<std::int64_t> u;
  for (std::int64_t n = 1; n <= Q; ++n)
    if (std::gcd(n, Q) == 1) u.push_back(n % Q);
  return u;
}

/// y -> E_{n in (Z/QZ)^x} prod_i g_i(y - P_i(n)).
inline CyclicSignal unit_group_average(const PolynomialFamily& fam, const std::vector<CyclicSignal>& g) {
  require(g.size() == fam.size(), "unit_group_average: expected " + std::to_string(fam.size()) + " signals");
  require(g.front().modulus() >= 2, "unit_group_average: Q must be >= 2");
  const auto units = unit_residues(g.front().modulus());
  return cyclic_average(fam, g, units, static_cast<double>(units.size()));
}

/// y -> E_{n in Z/QZ} prod_i g_i(y - P_i(n)).
inline CyclicSignal full_group_average(const PolynomialFamily& fam, const std::vector<CyclicSignal>& g) {
  require(g.size() == fam.size(), "full_group_average: expected " + std::to_string(fam.size()) + " signals");
  const std::int64_t Q = g.front().modulus();
  std::vector<std::int64_t> all(static_cast<std::size_t>(Q));
  std::iota(all.begin(), all.end(), 0);
  return cyclic_average(fam, g, all, static_cast<double>(Q));
}

inline constexpr std::int64_t kMaxPadicModulus = std::int64_t{1} << 20;

namespace detail {

inline std::int64_t prime_power_modulus(std::int64_t p, int j, const char* who) {
  require(p >= 2 && is_prime(static_cast<std::uint64_t>(p)), std::string(who) + ": p = " + std::to_string(p) +
                                                                 " is not prime");
  require(j >= 1, std::string(who) + ": j must be >= 1");
  std::int64_t Q = 1;
  for (int i = 0; i < j; ++i) {
    Q *= p;
    require(Q <= kMaxPadicModulus, std::string(who) + ": p^j exceeds 2^20");
  }
  return Q;
}

}  // namespace detail

/// lambda(xi) = E_{n in units mod p^j} e(xi P(n) / p^j) for xi = 0..p^j-1,
/// the eigenvalues of the linear unit average on characters.
inline std::vector<cplx> char_eigenvalues(std::int64_t p, int j, const Polynomial& P) {
  const std::int64_t Q = detail::prime_power_modulus(p, j, "char_eigenvalues");
  std::vector<cplx> push(static_cast<std::size_t>(Q));
  std::int64_t units = 0;
  for (std::int64_t n = 1; n < Q; ++n) {
    if (n % p == 0) continue;
    ++units;
    push[static_cast<std::size_t>(P.mod(n, Q))] += 1.0;
  }
  fft::forward(push);
  for (auto& z : push) z /= static_cast<double>(units);
  push[0] = 1.0;
  return push;
}

/// Weil-type ceiling for |lambda(xi)|, xi != 0: ((d-1) sqrt p + 1) / (p - 1)
/// when j = 1, p > d and p does not divide the leading coefficient; 1 otherwise.
inline double eigenvalue_bound(std::int64_t p, int j, const Polynomial& P, std::int64_t xi) {
  const int d = P.degree();
  if (xi == 0) return 1.0;
  const auto lead = P.coefficients().back();
  if (j != 1 || d < 1 || p <= d || lead % p == 0) return 1.0;
  const double sp = std::sqrt(static_cast<double>(p));
  return std::min(1.0, ((d - 1) * sp + 1.0) / static_cast<double>(p - 1));
}

/// Largest |lambda(xi)| over xi != 0.
inline double max_nonzero_eigenvalue(std::int64_t p, int j, const Polynomial& P) {
  const auto ev = char_eigenvalues(p, j, P);
  double m = 0.0;
  for (std::size_t xi = 1; xi < ev.size(); ++xi) m = std::max(m, std::abs(ev[xi]));
  return m;
}

/// h(m) = #{n in Z/p^jZ : P(n) = m}.
inline std::vector<std::int64_t> fiber_counts(std::int64_t p, int j, const Polynomial& P) {
  const std::int64_t Q = detail::prime_power_modulus(p, j, "fiber_counts");
  std::vector<std::int64_t> h(static_cast<std::size_t>(Q), 0);
  for (std::int64_t n = 0; n < Q; ++n) ++h[static_cast<std::size_t>(P.mod(n, Q))];
  return h;
}

/// ((1/p^j) sum_m h(m)^s)^(1/s).
inline double fiber_count_norm(std::int64_t p, int j, const Polynomial& P, double s) {
  require(s > 1.0, "fiber_count_norm: exponent must exceed 1");
  const auto h = fiber_counts(p, j, P);
  CompensatedSum<double> acc;
  for (auto c : h)
    if (c) acc.add(std::pow(static_cast<double>(c), s));
  return std::pow(acc.value() / static_cast<double>(h.size()), 1.0 / s);
}

struct NormLowerBound {
  double best_ratio = 0.0;  // max over trials of ||A g||_{2s} / ||g||_2
  int best_trial = -1;
  int trials = 0;
};

/// Seeded lower bound for ||A_units^P||_{L^2 -> L^{2s}} on Z/p^jZ with the
/// normalized counting measure. Trial t draws g with i.i.d. complex entries
/// (uniform on [-1,1]^2); odd trials add a constant so that near-extremal
/// functions with a large mean are also sampled.
inline NormLowerBound norm_lower_bound(std::int64_t p, int j, const Polynomial& P, double s, int trials,
                                       std::uint64_t seed) {
  require(s >= 1.0, "norm_lower_bound: s must be >= 1");
  require(trials >= 1, "norm_lower_bound: trials must be >= 1");
  const std::int64_t Q = detail::prime_power_modulus(p, j, "norm_lower_bound");
  const PolynomialFamily fam({P});
  std::mt19937_64 eng(seed);
  NormLowerBound out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    auto g = CyclicSignal::zeros(Q);
    const double shift = (t % 2 == 1) ? 4.0 * uniform01(eng) : 0.0;
    for (std::int64_t x = 0; x < Q; ++x) {
      const double re = 2.0 * uniform01(eng) - 1.0, im = 2.0 * uniform01(eng) - 1.0;
      g[x] = cplx(re + shift, im);
    }
    const double den = g.lp_norm(2.0);
    if (den == 0.0) continue;
    const double ratio = unit_group_average(fam, {g}).lp_norm(2.0 * s) / den;
    if (ratio > out.best_ratio) {
      out.best_ratio = ratio;
      out.best_trial = t;
    }
  }
  return out;
}

}  // namespace elab
