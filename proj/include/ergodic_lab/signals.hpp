#pragma once

// Finitely supported signals on Z, the multilinear averages A and its
// truncated form (sum over J_N = [N] \ [N/2]), their duals, and the bilinear
// pairing <f, g> = sum_x f(x) g(x).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ergodic_lab/approximants.hpp"
#include "ergodic_lab/core.hpp"
#include "ergodic_lab/csv.hpp"
#include "ergodic_lab/polynomial.hpp"

namespace elab {

/// Complex sequence on Z supported in [offset, offset + values.size()).
class SignalZ {
 public:
  SignalZ() = default;
  SignalZ(std::int64_t offset, std::vector<cplx> values) : offset_(offset), v_(std::move(values)) {}

  static SignalZ delta(std::int64_t x, cplx value = 1.0) { return SignalZ(x, {value}); }

  std::int64_t offset() const { return offset_; }
  std::int64_t end() const { return offset_ + static_cast<std::int64_t>(v_.size()); }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  const std::vector<cplx>& values() const { return v_; }

  cplx operator()(std::int64_t x) const {
    if (x < offset_ || x >= end()) return 0.0;
    return v_[static_cast<std::size_t>(x - offset_)];
  }

  bool is_zero() const {
    return std::all_of(v_.begin(), v_.end(), [](cplx z) { return z == cplx(0.0); });
  }

  /// Drops exact zeros at both ends.
  SignalZ trimmed() const {
    std::size_t lo = 0, hi = v_.size();
    while (lo < hi && v_[lo] == cplx(0.0)) ++lo;
    while (hi > lo && v_[hi - 1] == cplx(0.0)) --hi;
    if (lo == hi) return {};
    return SignalZ(offset_ + static_cast<std::int64_t>(lo), std::vector<cplx>(v_.begin() + lo, v_.begin() + hi));
  }

  SignalZ shifted(std::int64_t t) const { return SignalZ(offset_ + t, v_); }

  friend SignalZ operator+(const SignalZ& a, const SignalZ& b) {
    if (a.empty()) return b.trimmed();
    if (b.empty()) return a.trimmed();
    const std::int64_t lo = std::min(a.offset_, b.offset_), hi = std::max(a.end(), b.end());
    std::vector<cplx> v(static_cast<std::size_t>(hi - lo));
    for (std::int64_t x = lo; x < hi; ++x) v[static_cast<std::size_t>(x - lo)] = a(x) + b(x);
    return SignalZ(lo, std::move(v)).trimmed();
  }

  friend SignalZ operator*(cplx s, const SignalZ& a) {
    std::vector<cplx> v(a.v_);
    for (auto& z : v) z *= s;
    return SignalZ(a.offset_, std::move(v)).trimmed();
  }

  friend SignalZ operator-(const SignalZ& a, const SignalZ& b) { return a + cplx(-1.0) * b; }

 private:
  std::int64_t offset_ = 0;
  std::vector<cplx> v_;
};

/// <f, g> = sum_x f(x) g(x), no conjugation.
inline cplx inner_product(const SignalZ& f, const SignalZ& g) {
  const std::int64_t lo = std::max(f.offset(), g.offset()), hi = std::min(f.end(), g.end());
  CompensatedSum<cplx> acc;
  for (std::int64_t x = lo; x < hi; ++x) acc.add(f(x) * g(x));
  return acc.value();
}

/// Largest output window materialized by the averaging operators.
inline constexpr std::int64_t kMaxOutputWindow = std::int64_t{1} << 26;

namespace detail {

/// (1/floor N) sum_{n in range} w(n) prod_i f_i(x - shift_i(n)).
template <class ShiftFn>
SignalZ shifted_product_average(const WeightFunction& w, std::size_t k, const std::vector<SignalZ>& signals, double N,
                                bool truncated, ShiftFn&& shift) {
  require(signals.size() == k, "averaging operator: expected " + std::to_string(k) + " signals, got " +
                                   std::to_string(signals.size()));
  require(N >= 1.0 && std::isfinite(N), "averaging operator: N must be >= 1");
  const auto floor_n = static_cast<std::int64_t>(std::floor(N));
  require(floor_n >= 1, "averaging operator: floor(N) = 0");
  for (const auto& s : signals)
    if (s.empty() || s.is_zero()) return {};
  const std::int64_t first = truncated ? floor_n / 2 + 1 : 1;
  const std::int64_t last = floor_n;
  if (first > last) return {};
  const auto weights = w.table(static_cast<std::uint64_t>(first), static_cast<std::uint64_t>(last), N);

  struct Term {
    double weight;
    std::int64_t lo, hi;  // output x-range where every factor can be nonzero
    std::vector<std::int64_t> shifts;
  };
  std::vector<Term> terms;
  std::int64_t out_lo = std::numeric_limits<std::int64_t>::max(), out_hi = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t n = first; n <= last; ++n) {
    const double wn = weights[static_cast<std::size_t>(n - first)];
    if (wn == 0.0) continue;
    Term t{wn, std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::max(), {}};
    for (std::size_t i = 0; i < k; ++i) {
      const std::int64_t s = shift(i, n);
      t.shifts.push_back(s);
      i128 lo = static_cast<i128>(signals[i].offset()) + s, hi = static_cast<i128>(signals[i].end()) + s;
      if (lo < INT64_MIN / 2 || hi > INT64_MAX / 2)
        throw invalid_input("averaging operator: support shifted out of range at n=" + std::to_string(n) +
                            ", i=" + std::to_string(i + 1));
      t.lo = std::max(t.lo, static_cast<std::int64_t>(lo));
      t.hi = std::min(t.hi, static_cast<std::int64_t>(hi));
    }
    if (t.lo >= t.hi) continue;
    out_lo = std::min(out_lo, t.lo);
    out_hi = std::max(out_hi, t.hi);
    terms.push_back(std::move(t));
  }
  if (terms.empty()) return {};
  if (static_cast<i128>(out_hi) - out_lo > kMaxOutputWindow)
    throw invalid_input("averaging operator: output window of " + std::to_string(out_hi - out_lo) +
                        " points exceeds 2^26; use the cyclic model instead");

  const std::size_t width = static_cast<std::size_t>(out_hi - out_lo);
  const double inv = 1.0 / static_cast<double>(floor_n);
  auto blocks = map_chunks(width, 4096, [&](std::size_t b0, std::size_t b1) {
    std::vector<cplx> acc(b1 - b0);
    const std::int64_t x0 = out_lo + static_cast<std::int64_t>(b0), x1 = out_lo + static_cast<std::int64_t>(b1);
    for (const auto& t : terms) {
      const std::int64_t lo = std::max(t.lo, x0), hi = std::min(t.hi, x1);
      for (std::int64_t x = lo; x < hi; ++x) {
        cplx prod = t.weight * inv;
        for (std::size_t i = 0; i < k; ++i) prod *= signals[i](x - t.shifts[i]);
        acc[static_cast<std::size_t>(x - x0)] += prod;
      }
    }
    return acc;
  });
  std::vector<cplx> out;
  out.reserve(width);
  for (auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return SignalZ(out_lo, std::move(out)).trimmed();
}

}  // namespace detail

/// x -> (1/floor N) sum_n w(n) prod_i f_i(x - P_i(n)), with n over J_N when
/// truncated and over [N] otherwise.
inline SignalZ multi_average(const WeightFunction& w, const PolynomialFamily& fam, const std::vector<SignalZ>& signals,
                             double N, bool truncated) {
  return detail::shifted_product_average(w, fam.size(), signals, N, truncated,
                                         [&](std::size_t i, std::int64_t n) { return fam[i](n); });
}

/// The j-th dual (j is 1-based): x -> (1/floor N) sum_n w(n)
/// prod_i g_i(x - 1_{i != j} P_i(n) + P_j(n)).
inline SignalZ dual_average(std::size_t j, const WeightFunction& w, const PolynomialFamily& fam,
                            const std::vector<SignalZ>& signals, double N, bool truncated) {
  require(j >= 1 && j <= fam.size(), "dual_average: slot j must lie in [1, k]");
  return detail::shifted_product_average(w, fam.size(), signals, N, truncated, [&](std::size_t i, std::int64_t n) {
    const i128 pj = fam[j - 1](n);
    const i128 s = (i + 1 == j ? 0 : static_cast<i128>(fam[i](n))) - pj;
    if (s > INT64_MAX || s < INT64_MIN)
      throw invalid_input("dual_average: shift overflows at n=" + std::to_string(n) + ", i=" + std::to_string(i + 1));
    return static_cast<std::int64_t>(s);
  });
}

/// CSV with columns x,re,im, one row per stored point.
inline csv::Table to_table(const SignalZ& f) {
  csv::Table t{{"x", "re", "im"}, {}};
  for (std::int64_t x = f.offset(); x < f.end(); ++x)
    t.rows.push_back({static_cast<long long>(x), f(x).real(), f(x).imag()});
  return t;
}

/// Inverse of to_table; rows may come in any order, gaps are zero.
inline SignalZ signal_from_table(const csv::Table& t) {
  const auto cx = t.column("x"), cre = t.column("re"), cim = t.column("im");
  if (t.rows.empty()) return {};
  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& r : t.rows) {
    const auto x = static_cast<std::int64_t>(csv::as_double(r[cx]));
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  require(hi - lo < kMaxOutputWindow, "signal csv: support too wide");
  std::vector<cplx> v(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& r : t.rows) {
    const auto x = static_cast<std::int64_t>(csv::as_double(r[cx]));
    v[static_cast<std::size_t>(x - lo)] = {csv::as_double(r[cre]), csv::as_double(r[cim])};
  }
  return SignalZ(lo, std::move(v));
}

}  // namespace elab
