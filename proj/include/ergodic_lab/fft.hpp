#pragma once

// Discrete Fourier transforms of arbitrary length: iterative radix-2 for
// powers of two, Bluestein's chirp-z reduction otherwise.
//
// forward: X[k] = sum_n x[n] e(nk/L)   (e(t) = exp(-2 pi i t))
// inverse: x[n] = (1/L) sum_k X[k] e(-nk/L)

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ergodic_lab/core.hpp"

namespace elab::fft {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace detail {

// exp(sign * 2 pi i k / n) with k reduced to keep the argument small
inline cplx root(long double k, long double n, int sign) {
  const long double t = 2.0L * std::numbers::pi_v<long double> * k / n;
  return {static_cast<double>(std::cos(t)), static_cast<double>(sign * std::sin(t))};
}

inline void radix2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<cplx> tw(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) tw[k] = root(static_cast<long double>(k), static_cast<long double>(n), sign);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2, stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + half] * tw[k * stride];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

inline void bluestein(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle exact for large n
    const unsigned long long k2 = (static_cast<unsigned long long>(k) * k) % (2ULL * n);
    chirp[k] = root(static_cast<long double>(k2), static_cast<long double>(2 * n), sign);
  }
  std::vector<cplx> x(m), y(m);
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);
  radix2(x, -1);
  radix2(y, -1);
  for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
  radix2(x, +1);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * inv * chirp[k];
}

inline void transform(std::vector<cplx>& a, int sign) {
  if (a.size() <= 1) return;
  if (is_pow2(a.size()))
    radix2(a, sign);
  else
    bluestein(a, sign);
}

}  // namespace detail

inline void forward(std::vector<cplx>& a) { detail::transform(a, -1); }

inline void inverse(std::vector<cplx>& a) {
  detail::transform(a, +1);
  const double inv = a.empty() ? 0.0 : 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= inv;
}

}  // namespace elab::fft
