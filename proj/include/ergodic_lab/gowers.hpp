#pragma once

// Two-sided estimates of the little Gowers norm
//   ||f||_{u^{s+1}(I)} = sup_{deg P <= s} |E_{n in I} f(n) e(P(n))|
// by a dyadic grid over the coefficients of degree >= 2 and an oversampled
// FFT over the linear coefficient.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ergodic_lab/approximants.hpp"
#include "ergodic_lab/core.hpp"
#include "ergodic_lab/fft.hpp"

namespace elab {

struct UNormEstimate {
  double lower_bound = 0.0;     // attained by the witness phase
  double additive_error = 0.0;  // true norm <= lower_bound + additive_error
  std::vector<double> witness;  // c_0..c_s in [0,1), phase sum_j c_j n^j
  std::vector<double> steps;    // effective grid steps delta_0..delta_s

  double upper_bound() const { return lower_bound + additive_error; }
};

struct UNormOptions {
  /// Requested steps delta_0..delta_s (empty: defaults). Each is rounded
  /// down to a power of two; delta_0 is ignored because a constant phase
  /// does not change the modulus.
  std::vector<double> steps;
  /// Minimal FFT oversampling for the linear coefficient (>= 8).
  int oversample = 64;
  /// Rejection threshold for grid points times FFT work.
  double cost_budget = 0x1p38;
};

namespace detail {

inline double dyadic_floor(double delta) {
  require(delta > 0.0 && delta <= 1.0, "u_norm_estimate: grid steps must lie in (0, 1]");
  int e = 0;
  std::frexp(delta, &e);  // delta in [2^(e-1), 2^e)
  return std::ldexp(1.0, e - 1);
}

inline std::int64_t binom_small(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct GridBest {
  double value = -1.0;
  std::vector<double> coeffs;  // c_1..c_s in the recentred variable
};

inline bool better(const GridBest& a, const GridBest& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.coeffs < b.coeffs;
}

}  // namespace detail

/// Estimates ||f||_{u^{s+1}} for f given on I = [start, start + values.size()).
inline UNormEstimate u_norm_estimate(const std::vector<cplx>& values, std::int64_t start, int s,
                                     const UNormOptions& opt = {}) {
  require(s >= 0, "u_norm_estimate: degree s must be >= 0");
  require(s <= 3, "u_norm_estimate: degree s = " + std::to_string(s) + " exceeds 3");
  require(!values.empty(), "u_norm_estimate: empty interval");
  require(opt.oversample >= 8, "u_norm_estimate: oversampling factor must be >= 8");
  require(opt.steps.empty() || opt.steps.size() == static_cast<std::size_t>(s) + 1,
          "u_norm_estimate: need steps delta_0..delta_s");
  const auto N = static_cast<std::int64_t>(values.size());

  double mean_abs = 0.0;
  {
    CompensatedSum<double> acc;
    for (auto z : values) acc.add(std::abs(z));
    mean_abs = acc.value() / static_cast<double>(N);
  }

  UNormEstimate out;
  out.steps.assign(static_cast<std::size_t>(s) + 1, 0.0);
  out.witness.assign(static_cast<std::size_t>(s) + 1, 0.0);
  if (s == 0) {
    CompensatedSum<cplx> acc;
    for (auto z : values) acc.add(z);
    out.lower_bound = std::abs(acc.value() / static_cast<double>(N));
    return out;
  }

  // recentre so that |m| <= N/2; the supremum is translation invariant
  const std::int64_t centre = start + (N - 1) / 2;
  const std::int64_t m_lo = start - centre, m_hi = start + N - 1 - centre;
  const double m_max = static_cast<double>(std::max(-m_lo, m_hi));

  // linear coefficient on the grid k/L, L >= oversample * N, evaluated as
  // R = L / L0 modulated FFTs of length L0 = 8 N (rounded up to 2^m)
  std::size_t L = fft::next_pow2(static_cast<std::size_t>(N) * static_cast<std::size_t>(opt.oversample));
  if (!opt.steps.empty()) L = std::max(L, static_cast<std::size_t>(1.0 / detail::dyadic_floor(opt.steps[1])));
  require(L <= (std::size_t{1} << 40), "u_norm_estimate: linear grid finer than 2^-40");
  const std::size_t L0 = std::min(L, fft::next_pow2(static_cast<std::size_t>(N) * 8));
  const std::size_t R = L / L0;
  out.steps[1] = 1.0 / static_cast<double>(L);

  // higher coefficients: dyadic grids anchored at 0
  std::vector<std::int64_t> counts;
  double points = 1.0;
  for (int j = 2; j <= s; ++j) {
    double d = opt.steps.empty() ? 0.0 : detail::dyadic_floor(opt.steps[static_cast<std::size_t>(j)]);
    if (d == 0.0) d = detail::dyadic_floor(std::min(1.0, 1.0 / std::pow(m_max, j)));
    out.steps[static_cast<std::size_t>(j)] = d;
    counts.push_back(static_cast<std::int64_t>(std::llround(1.0 / d)));
    points *= 1.0 / d;
  }
  const double ffts = points * static_cast<double>(R);
  const double cost = ffts * static_cast<double>(L0) * std::log2(static_cast<double>(L0));
  if (cost > opt.cost_budget) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "u_norm_estimate: estimated cost %.3g exceeds budget %.3g (%.0f FFTs of length %zu)",
                  cost, opt.cost_budget, ffts, L0);
    throw invalid_input(buf);
  }

  const auto total = static_cast<std::size_t>(ffts);
  const double inv_n = 1.0 / static_cast<double>(N);
  auto bests = map_chunks(total, 1, [&](std::size_t lo, std::size_t hi) {
    detail::GridBest best;
    std::vector<cplx> buf(L0);
    std::vector<double> hc(counts.size());
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const std::size_t r = idx % R;
      std::size_t rest = idx / R;
      for (std::size_t c = 0; c < counts.size(); ++c) {
        hc[c] = static_cast<double>(rest % static_cast<std::size_t>(counts[c])) * out.steps[c + 2];
        rest /= static_cast<std::size_t>(counts[c]);
      }
      std::fill(buf.begin(), buf.end(), cplx(0.0));
      for (std::int64_t t = 0; t < N; ++t) {
        const std::int64_t m = m_lo + t;
        double ph = static_cast<double>((static_cast<i128>(r) * t) % static_cast<i128>(L)) / static_cast<double>(L);
        std::int64_t mp = m;
        for (std::size_t c = 0; c < hc.size(); ++c) {
          mp *= m;
          ph += frac_mul(mp, hc[c]);
        }
        buf[static_cast<std::size_t>(t)] = values[static_cast<std::size_t>(t)] * e(ph);
      }
      fft::forward(buf);
      for (std::size_t k = 0; k < L0; ++k) {
        const double v = std::abs(buf[k]) * inv_n;
        if (v < best.value) continue;
        detail::GridBest cand;
        cand.value = v;
        cand.coeffs.push_back(static_cast<double>(k * R + r) / static_cast<double>(L));
        cand.coeffs.insert(cand.coeffs.end(), hc.begin(), hc.end());
        if (detail::better(cand, best)) best = std::move(cand);
      }
    }
    return best;
  });
  detail::GridBest best;
  for (auto& b : bests)
    if (detail::better(b, best)) best = std::move(b);
  out.lower_bound = best.value;

  // the FFT measures sum_t g(t) e(k t / L) with t = m - m_lo, so the phase
  // in m is c_1 m + const; convert sum_j b_j (n - centre)^j back to n
  std::vector<double> b(static_cast<std::size_t>(s) + 1, 0.0);
  for (int j = 1; j <= s; ++j) b[static_cast<std::size_t>(j)] = best.coeffs[static_cast<std::size_t>(j - 1)];
  for (int i = 0; i <= s; ++i) {
    double acc = 0.0;
    for (int j = std::max(i, 1); j <= s; ++j) {
      const std::int64_t K = detail::binom_small(j, i) * ipow_checked(-centre, j - i);
      acc += frac_mul(K, b[static_cast<std::size_t>(j)]);
    }
    out.witness[static_cast<std::size_t>(i)] = frac(acc);
  }

  double err = 0.0;
  for (int j = 1; j <= s; ++j) err += out.steps[static_cast<std::size_t>(j)] * std::pow(m_max, j);
  out.additive_error = std::numbers::pi * mean_abs * err;
  return out;
}

/// Estimate for ||w1 - w2||_{u^{d+1}[N]}, both weights sampled on [1, N] at scale N.
inline UNormEstimate weight_unorm_gap(const WeightFunction& w1, const WeightFunction& w2, std::int64_t N, int d,
                                      const UNormOptions& opt = {}) {
  require(N >= 1, "weight_unorm_gap: N must be >= 1");
  const auto a = w1.table(1, static_cast<std::uint64_t>(N), static_cast<double>(N));
  const auto b = w2.table(1, static_cast<std::uint64_t>(N), static_cast<double>(N));
  std::vector<cplx> f(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) f[i] = a[i] - b[i];
  return u_norm_estimate(f, 1, d, opt);
}

}  // namespace elab
