#pragma once

// Shared numerics: error types, the additive character, logarithmic scales,
// compensated summation and a deterministic chunked parallel reduction.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace elab {

using cplx = std::complex<double>;
using i128 = __int128;

/// Input rejected by a precondition check. Maps to CLI exit code 1.
struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its target. Maps to CLI exit code 2.
struct numeric_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw invalid_input(what);
}

/// Reduces theta to [0, 1).
inline double frac(double theta) {
  double f = theta - std::floor(theta);
  return f >= 1.0 ? 0.0 : f;
}

/// The standard character e(theta) = exp(-2 pi i theta). Every module goes
/// through this helper so the sign convention is fixed in one place.
inline cplx e(double theta) {
  const double t = 2.0 * std::numbers::pi * frac(theta);
  return {std::cos(t), -std::sin(t)};
}

/// e(num / den) with the numerator reduced modulo den first.
inline cplx e_ratio(std::int64_t num, std::int64_t den) {
  std::int64_t r = num % den;
  if (r < 0) r += den;
  return e(static_cast<double>(r) / static_cast<double>(den));
}

/// frac(p * x) computed exactly for the double value x (up to the final
/// rounding to double), so large integer arguments keep full phase accuracy.
inline double frac_mul(std::int64_t p, double x) {
  if (p == 0 || x == 0.0) return 0.0;
  int exp2 = 0;
  const double m = std::frexp(x, &exp2);  // x = m 2^exp2, 0.5 <= |m| < 1
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  const int shift = 53 - exp2;  // x = mant 2^-shift
  if (shift <= 0) return 0.0;
  const i128 prod = static_cast<i128>(p) * mant;
  if (shift > 120) return frac(static_cast<double>(static_cast<long double>(p) * static_cast<long double>(x)));
  const i128 modulus = static_cast<i128>(1) << shift;
  i128 r = prod % modulus;
  if (r < 0) r += modulus;
  const long double f = std::ldexp(static_cast<long double>(r), -shift);
  return frac(static_cast<double>(f));
}

/// Log N = floor(log2 N) for N >= 1.
inline int log_scale(double n) {
  require(n >= 1.0, "log_scale: argument must be >= 1");
  int l = static_cast<int>(std::floor(std::log2(n)));
  // guard the floor against rounding at exact powers of two
  while (std::ldexp(1.0, l + 1) <= n) ++l;
  while (l > 0 && std::ldexp(1.0, l) > n) --l;
  return l;
}

/// Japanese bracket <x> = sqrt(1 + x^2).
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

inline std::int64_t ipow_checked(std::int64_t base, int exp) {
  i128 r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > INT64_MAX || r < INT64_MIN) throw invalid_input("integer power overflows 64 bits");
  }
  return static_cast<std::int64_t>(r);
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Neumaier-compensated accumulator.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, cplx>) {
      double re = sum_.real(), im = sum_.imag();
      double cre = comp_.real(), cim = comp_.imag();
      step(re, cre, x.real());
      step(im, cim, x.imag());
      sum_ = {re, im};
      comp_ = {cre, cim};
    } else {
      step(sum_, comp_, x);
    }
  }
  T value() const { return sum_ + comp_; }

 private:
  static void step(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  T sum_{};
  T comp_{};
};

namespace detail {
inline std::atomic<int>& thread_setting() {
  static std::atomic<int> n{1};
  return n;
}
}  // namespace detail

/// Worker threads used by data-parallel loops. Results never depend on it.
inline int threads() { return detail::thread_setting().load(); }
inline void set_threads(int n) { detail::thread_setting().store(std::max(1, n)); }

/// Runs fn(chunk_begin, chunk_end) over fixed chunks of [0, count) and returns
/// the per-chunk results in chunk order. Chunk boundaries depend only on
/// count and grain, so any in-order reduction is bit-stable across thread
/// counts.
template <class Fn>
auto map_chunks(std::size_t count, std::size_t grain, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}, std::size_t{0}));
  grain = std::max<std::size_t>(grain, 1);
  const std::size_t chunks = count == 0 ? 0 : (count + grain - 1) / grain;
  std::vector<R> out(chunks);
  const int workers = static_cast<int>(std::min<std::size_t>(threads(), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c)
      out[c] = fn(c * grain, std::min(count, (c + 1) * grain));
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t c = next.fetch_add(1);
        if (c >= chunks) return;
        try {
          out[c] = fn(c * grain, std::min(count, (c + 1) * grain));
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          next.store(chunks);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Pairwise (tree) sum of partial results in index order.
template <class T>
T pairwise_sum(std::vector<T> parts) {
  if (parts.empty()) return T{};
  while (parts.size() > 1) {
    std::vector<T> next((parts.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = 2 * i + 1 < parts.size() ? parts[2 * i] + parts[2 * i + 1] : parts[2 * i];
    parts = std::move(next);
  }
  return parts.front();
}

/// Deterministic parallel sum of term(i) over [0, count).
template <class T, class Term>
T parallel_sum(std::size_t count, Term&& term, std::size_t grain = 1 << 14) {
  auto parts = map_chunks(count, grain, [&](std::size_t lo, std::size_t hi) {
    CompensatedSum<T> acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
    return acc.value();
  });
  return pairwise_sum(std::move(parts));
}

/// Uniform double in [0, 1) from a 64-bit engine, identical on every platform.
template <class Engine>
double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace elab
