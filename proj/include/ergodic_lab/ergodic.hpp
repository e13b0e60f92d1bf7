#pragma once

// Circle rotations T x = x + alpha with trigonometric-polynomial
// observables, weighted polynomial multiple averages along their orbits,
// convergence along lacunary scales and the prime-weighted comparison.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ergodic_lab/approximants.hpp"
#include "ergodic_lab/arithmetic.hpp"
#include "ergodic_lab/core.hpp"
#include "ergodic_lab/polynomial.hpp"
#include "ergodic_lab/variation.hpp"

namespace elab {

/// f(x) = sum_m c_m e(m x) with at most 64 frequencies.
class TrigPolynomial {
 public:
  static constexpr std::size_t kMaxTerms = 64;

  TrigPolynomial() = default;
  explicit TrigPolynomial(std::map<std::int64_t, cplx> terms) : terms_(std::move(terms)) {
    require(terms_.size() <= kMaxTerms, "TrigPolynomial: more than 64 frequencies");
  }
  static TrigPolynomial constant(cplx c) { return TrigPolynomial({{0, c}}); }
  static TrigPolynomial character(std::int64_t m) { return TrigPolynomial({{m, 1.0}}); }

  /// "m:re[:im]" terms joined by '+', e.g. "0:1+1:0.5:-0.5".
  static TrigPolynomial parse(const std::string& text) {
    std::map<std::int64_t, cplx> t;
    std::stringstream ss(text);
    std::string term;
    while (std::getline(ss, term, '+')) {
      std::vector<std::string> f;
      std::stringstream ts(term);
      std::string part;
      while (std::getline(ts, part, ':')) f.push_back(part);
      if (f.size() < 2 || f.size() > 3) throw invalid_input("trig polynomial: bad term '" + term + "'");
      try {
        std::size_t used = 0;
        const auto m = std::stoll(f[0], &used);
        if (used != f[0].size()) throw invalid_input("");
        const double re = std::stod(f[1]), im = f.size() == 3 ? std::stod(f[2]) : 0.0;
        t[m] += cplx(re, im);
      } catch (const std::exception&) {
        throw invalid_input("trig polynomial: bad term '" + term + "'");
      }
    }
    if (t.empty()) throw invalid_input("trig polynomial: empty");
    return TrigPolynomial(std::move(t));
  }

  cplx operator()(double x) const {
    cplx acc = 0.0;
    const double fx = frac(x);
    for (const auto& [m, c] : terms_) acc += c * e(frac_mul(m, fx));
    return acc;
  }

  /// Value at x + theta with theta already reduced mod 1.
  cplx shifted(double x, double theta) const { return (*this)(frac(x) + theta); }

  cplx mean() const {
    auto it = terms_.find(0);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }
  const std::map<std::int64_t, cplx>& terms() const { return terms_; }

  std::string to_string() const {
    std::string s;
    for (const auto& [m, c] : terms_) {
      if (!s.empty()) s += '+';
      s += std::to_string(m) + ":" + csv_number(c.real()) + (c.imag() != 0.0 ? ":" + csv_number(c.imag()) : "");
    }
    return s;
  }

 private:
  static std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  std::map<std::int64_t, cplx> terms_;
};

struct RotationSystem {
  double alpha = 0.0;

  /// True when alpha lies within 1e-12 of some b/q with q <= max_q.
  bool near_rational(std::int64_t max_q = 1000) const {
    for (std::int64_t q = 1; q <= max_q; ++q) {
      const double qa = static_cast<double>(q) * alpha;
      if (std::abs(qa - std::nearbyint(qa)) <= 1e-12 * static_cast<double>(q)) return true;
    }
    return false;
  }
};

namespace detail {

inline void check_funcs(const PolynomialFamily& fam, const std::vector<TrigPolynomial>& funcs) {
  require(funcs.size() == fam.size(), "rotation: expected " + std::to_string(fam.size()) + " observables, got " +
                                          std::to_string(funcs.size()));
}

/// prod_i f_i(x + P_i(n) alpha), with frac(P_i(n) alpha) exact for the double alpha.
inline cplx orbit_product(const RotationSystem& sys, const PolynomialFamily& fam,
                          const std::vector<TrigPolynomial>& funcs, std::int64_t n, double x) {
  cplx prod = 1.0;
  for (std::size_t i = 0; i < fam.size(); ++i) prod *= funcs[i].shifted(x, frac_mul(fam[i](n), sys.alpha));
  return prod;
}

}  // namespace detail

/// (1/floor N) sum_{n=1}^{floor N} w(n) prod_i f_i(x + P_i(n) alpha).
inline cplx rotation_average(const RotationSystem& sys, const WeightFunction& w, const PolynomialFamily& fam,
                             const std::vector<TrigPolynomial>& funcs, double N, double x) {
  detail::check_funcs(fam, funcs);
  require(N >= 1.0 && std::isfinite(N), "rotation_average: N must be >= 1");
  const auto n_max = static_cast<std::int64_t>(std::floor(N));
  const auto weights = w.table(1, static_cast<std::uint64_t>(n_max), N);
  const cplx s = parallel_sum<cplx>(weights.size(), [&](std::size_t i) {
    const double wn = weights[i];
    if (wn == 0.0) return cplx(0.0);
    return wn * detail::orbit_product(sys, fam, funcs, static_cast<std::int64_t>(i) + 1, x);
  });
  return s / static_cast<double>(n_max);
}

struct ConvergenceRow {
  double N = 0.0;
  cplx value;
  double deviation = 0.0;  // |value - limit|
  double v2_so_far = 0.0;  // bold-V^2 of the values up to this scale
};

struct ConvergenceReport {
  cplx limit;  // prod_i mean(f_i)
  bool limit_unreliable = false;  // alpha close to a rational with small denominator
  std::vector<ConvergenceRow> rows;
};

/// Averages along lacunary scales against the equidistribution limit
/// prod_i mean(f_i), which holds for irrational alpha.
inline ConvergenceReport convergence_series(const RotationSystem& sys, const WeightFunction& w,
                                            const PolynomialFamily& fam, const std::vector<TrigPolynomial>& funcs,
                                            const LacunarySet& scales, double x) {
  detail::check_funcs(fam, funcs);
  require(scales.lambda() >= 1.5, "convergence_series: scales must be lambda-lacunary with lambda >= 1.5");
  ConvergenceReport rep;
  rep.limit = 1.0;
  for (const auto& f : funcs) rep.limit *= f.mean();
  rep.limit_unreliable = sys.near_rational();
  std::vector<cplx> values;
  for (double N : scales.values()) {
    ConvergenceRow row;
    row.N = N;
    row.value = rotation_average(sys, w, fam, funcs, N, x);
    row.deviation = std::abs(row.value - rep.limit);
    values.push_back(row.value);
    row.v2_so_far = variation_norm(values, 2.0).norm;
    rep.rows.push_back(row);
  }
  return rep;
}

/// |(ln N / N) sum_{p <= N} F(p) - (1/N) sum_{n <= N} Lambda(n) F(n)| with
/// F(n) = prod_i f_i(x + P_i(n) alpha).
inline double prime_vs_mangoldt_gap(const RotationSystem& sys, const PolynomialFamily& fam,
                                    const std::vector<TrigPolynomial>& funcs, double N, double x) {
  detail::check_funcs(fam, funcs);
  require(N >= 10.0 && std::isfinite(N), "prime_vs_mangoldt_gap: N must be >= 10");
  const auto n_max = static_cast<std::int64_t>(std::floor(N));
  const auto lam = mangoldt_table(1, static_cast<std::uint64_t>(n_max));
  const double ln_n = std::log(static_cast<double>(n_max));
  const cplx s = parallel_sum<cplx>(lam.size(), [&](std::size_t i) {
    const double l = lam[i];
    if (l == 0.0) return cplx(0.0);
    const auto n = static_cast<std::int64_t>(i) + 1;
    const cplx F = detail::orbit_product(sys, fam, funcs, n, x);
    const bool prime = is_prime(static_cast<std::uint64_t>(n));
    return (prime ? ln_n : 0.0) * F - l * F;
  });
  return std::abs(s / static_cast<double>(n_max));
}

}  // namespace elab
