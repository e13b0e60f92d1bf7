#pragma once

// Circle-method objects: heights and Farey levels, major arcs, the unit-group
// Gauss sums G^x, the discrete symbol m_{N,w} over J_N, its continuous part,
// the major-arc approximation scan, the Ionescu-Wainger power C(N) and the
// projection Pi on cyclic groups.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ergodic_lab/approximants.hpp"
#include "ergodic_lab/core.hpp"
#include "ergodic_lab/cyclic.hpp"
#include "ergodic_lab/polynomial.hpp"
#include "ergodic_lab/signals.hpp"

namespace elab {

// ---------------------------------------------------------------------------
// Heights and Farey levels

/// Reduced b/q with 0 <= b < q.
struct RationalFrequency {
  std::int64_t b = 0;
  std::int64_t q = 1;

  /// Reduces num/den mod 1.
  static RationalFrequency reduce(std::int64_t num, std::int64_t den) {
    require(den >= 1, "rational frequency: denominator must be positive");
    std::int64_t b = mod_floor(num, den);
    const std::int64_t g = std::gcd(b, den);
    return {b / g, den / g};
  }

  double value() const { return static_cast<double>(b) / static_cast<double>(q); }
  friend bool operator==(const RationalFrequency&, const RationalFrequency&) = default;
};

/// Smallest power of two >= q, for reduced b/q.
inline std::int64_t height(std::int64_t b, std::int64_t q) {
  require(q >= 1, "height: q must be positive");
  require(std::gcd(mod_floor(b, q), q) == 1, "height: fraction " + std::to_string(b) + "/" + std::to_string(q) +
                                                  " is not reduced");
  std::int64_t h = 1;
  while (h < q) h <<= 1;
  return h;
}

/// Level l with height 2^l.
inline int height_level(std::int64_t q) {
  int l = 0;
  while ((std::int64_t{1} << l) < q) ++l;
  return l;
}

inline constexpr int kMaxFareyLevel = 12;

/// All reduced b/q in [0, 1) with q <= 2^l, ascending.
struct FareySet {
  int level = 0;
  std::vector<RationalFrequency> members;
};

inline FareySet farey_set(int level) {
  require(level >= 0, "farey_set: level must be >= 0");
  if (level > kMaxFareyLevel) {
    const double est = 3.0 / (std::numbers::pi * std::numbers::pi) * std::ldexp(1.0, 2 * level);
    throw invalid_input("farey_set: level " + std::to_string(level) + " would hold about " +
                        std::to_string(static_cast<long long>(est)) + " fractions (limit: level " +
                        std::to_string(kMaxFareyLevel) + ")");
  }
  FareySet f{level, {}};
  const std::int64_t m = std::int64_t{1} << level;
  for (std::int64_t q = 1; q <= m; ++q)
    for (std::int64_t b = 0; b < q; ++b)
      if (std::gcd(b, q) == 1) f.members.push_back({b, q});
  std::sort(f.members.begin(), f.members.end(),
            [](const RationalFrequency& x, const RationalFrequency& y) { return x.b * y.q < y.b * x.q; });
  return f;
}

/// Smallest distance mod 1 between distinct members (1 for a single member).
inline double farey_min_gap(const FareySet& f) {
  const auto& m = f.members;
  if (m.size() < 2) return 1.0;
  double gap = 1.0 - m.back().value() + m.front().value();
  for (std::size_t i = 1; i < m.size(); ++i)
    gap = std::min(gap, static_cast<double>(m[i].b * m[i - 1].q - m[i - 1].b * m[i].q) /
                            static_cast<double>(m[i].q * m[i - 1].q));
  return gap;
}

/// Union over FareySet(l) of [b/q - 2^k, b/q + 2^k] mod 1.
struct MajorArcSpec {
  int level = 0;
  int k_scale = 0;

  /// Exact membership test for the rational point num/den.
  bool contains(std::int64_t num, std::int64_t den) const {
    require(den >= 1, "MajorArcSpec::contains: denominator must be positive");
    if (k_scale >= -1) return true;  // radius >= 1/2 covers the circle
    const std::int64_t x = mod_floor(num, den);
    const std::int64_t m = std::int64_t{1} << level;
    const int s = -k_scale;  // radius 2^-s
    for (std::int64_t q = 1; q <= m; ++q) {
      // candidates b with |x/den - b/q| <= 2^-s, i.e. |x q - b den| 2^s <= den q
      const i128 lo_num = (static_cast<i128>(x) * q << s) - static_cast<i128>(den) * q;
      const i128 hi_num = (static_cast<i128>(x) * q << s) + static_cast<i128>(den) * q;
      const i128 scale = static_cast<i128>(den) << s;
      i128 b_lo = lo_num / scale - 1, b_hi = hi_num / scale + 1;
      for (i128 b = b_lo; b <= b_hi; ++b) {
        const std::int64_t br = mod_floor(static_cast<std::int64_t>(b), q);
        if (std::gcd(br, q) != 1) continue;
        i128 d = static_cast<i128>(x) * q - b * den;
        if (d < 0) d = -d;
        if ((d << s) <= static_cast<i128>(den) * q) return true;
      }
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Gauss sums and exponential sums

/// G^x(a/q) = E_{n in [q]^x} e(sum_i a_i P_i(n) / q).
inline cplx gauss_sum(const PolynomialFamily& fam, const std::vector<std::int64_t>& a, std::int64_t q) {
  require(q >= 1, "gauss_sum: q must be >= 1");
  require(a.size() == fam.size(), "gauss_sum: need one numerator per polynomial");
  CompensatedSum<cplx> acc;
  std::int64_t units = 0;
  for (std::int64_t n = 1; n <= q; ++n) {
    if (std::gcd(n, q) != 1) continue;
    ++units;
    i128 num = 0;
    for (std::size_t i = 0; i < fam.size(); ++i)
      num = (num + static_cast<i128>(mod_floor(a[i], q)) * fam[i].mod(n, q)) % q;
    acc.add(e_ratio(static_cast<std::int64_t>(num), q));
  }
  return acc.value() / static_cast<double>(units);
}

namespace detail {

inline std::int64_t floor_scale(double N) {
  require(N >= 1.0 && std::isfinite(N), "N must be >= 1");
  return static_cast<std::int64_t>(std::floor(N));
}

/// (1/floor N) sum_{n in J_N} w(n) e(phase(n)) with a sampled weight table.
template <class Phase>
cplx weighted_phase_sum(const std::vector<double>& weights, std::int64_t first, std::int64_t floor_n, Phase&& phase) {
  const cplx s = parallel_sum<cplx>(weights.size(), [&](std::size_t i) {
    const double w = weights[i];
    if (w == 0.0) return cplx(0.0);
    return w * e(phase(first + static_cast<std::int64_t>(i)));
  });
  return s / static_cast<double>(floor_n);
}

}  // namespace detail

/// Pre-sampled weights on J_N, reusable across many frequencies.
struct SampledWeight {
  std::int64_t floor_n = 0;
  std::int64_t first = 0;  // first index of J_N
  std::vector<double> values;

  SampledWeight(const WeightFunction& w, double N) : floor_n(detail::floor_scale(N)), first(floor_n / 2 + 1) {
    if (first <= floor_n)
      values = w.table(static_cast<std::uint64_t>(first), static_cast<std::uint64_t>(floor_n), N);
  }
};

/// m_{N,w}(xi) = (1/floor N) sum_{n in J_N} w(n) e(xi . P(n)).
inline cplx exp_sum_m(const SampledWeight& sw, const PolynomialFamily& fam, const std::vector<double>& xi) {
  require(xi.size() == fam.size(), "exp_sum_m: need one frequency per polynomial");
  return detail::weighted_phase_sum(sw.values, sw.first, sw.floor_n, [&](std::int64_t n) {
    double ph = 0.0;
    for (std::size_t i = 0; i < fam.size(); ++i) ph += frac_mul(fam[i](n), xi[i]);
    return ph;
  });
}

inline cplx exp_sum_m(const WeightFunction& w, const PolynomialFamily& fam, double N, const std::vector<double>& xi) {
  return exp_sum_m(SampledWeight(w, N), fam, xi);
}

/// m_{N,w}(a/q + eta) with the rational part reduced exactly mod q.
inline cplx exp_sum_m(const SampledWeight& sw, const PolynomialFamily& fam, const std::vector<std::int64_t>& a,
                      std::int64_t q, const std::vector<double>& eta) {
  require(a.size() == fam.size() && eta.size() == fam.size(), "exp_sum_m: need one frequency per polynomial");
  require(q >= 1, "exp_sum_m: q must be >= 1");
  return detail::weighted_phase_sum(sw.values, sw.first, sw.floor_n, [&](std::int64_t n) {
    i128 num = 0;
    double ph = 0.0;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      num = (num + static_cast<i128>(mod_floor(a[i], q)) * fam[i].mod(n, q)) % q;
      ph += frac_mul(fam[i](n), eta[i]);
    }
    return ph + static_cast<double>(num) / static_cast<double>(q);
  });
}

// ---------------------------------------------------------------------------
// Continuous symbol

namespace detail {

struct GaussLegendre16 {
  std::array<double, 16> nodes{}, weights{};
  GaussLegendre16() {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[static_cast<std::size_t>(i)] = x;
      weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline const GaussLegendre16& gauss_legendre16() {
  static const GaussLegendre16 rule;
  return rule;
}

}  // namespace detail

struct SymbolValue {
  cplx value;
  int panels = 0;
  double residual = 0.0;  // |I_2P - I_P| at acceptance
};

/// m~_{N,R}(zeta) = int_{1/2}^{1} e(zeta . P(N t)) dt by composite 16-point
/// Gauss-Legendre; the panel count is doubled until two successive results
/// agree to rel_tol.
inline SymbolValue continuous_symbol_detail(const PolynomialFamily& fam, double N, const std::vector<double>& zeta,
                                            double rel_tol = 1e-12) {
  require(zeta.size() == fam.size(), "continuous_symbol: need one frequency per polynomial");
  require(rel_tol >= 1e-12, "continuous_symbol: rel_tol must be >= 1e-12");
  require(N > 0.0 && std::isfinite(N), "continuous_symbol: N must be positive");
  double cycles = 0.0;  // bound on the total variation of the phase, in turns
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto& c = fam[i].coefficients();
    for (std::size_t j = 1; j < c.size(); ++j)
      cycles += std::abs(zeta[i]) * std::abs(static_cast<double>(c[j])) * std::pow(N, static_cast<double>(j));
  }
  require(cycles < 1e8, "continuous_symbol: phase variation too large for quadrature");
  const auto& gl = detail::gauss_legendre16();
  auto integrate = [&](long panels) {
    const double h = 0.5 / static_cast<double>(panels);
    return parallel_sum<cplx>(static_cast<std::size_t>(panels), [&](std::size_t p) {
      const double a = 0.5 + h * static_cast<double>(p);
      cplx acc = 0.0;
      for (std::size_t g = 0; g < 16; ++g) {
        const double t = a + 0.5 * h * (gl.nodes[g] + 1.0);
        double ph = 0.0;
        for (std::size_t i = 0; i < fam.size(); ++i) ph += zeta[i] * fam[i].real(N * t);
        acc += gl.weights[g] * e(ph);
      }
      return acc * (0.5 * h);
    }, 256);
  };
  long panels = std::max<long>(16, static_cast<long>(std::ceil(cycles)));
  cplx coarse = integrate(panels);
  double residual = 0.0;
  for (int doubling = 0; doubling < 12; ++doubling) {
    const cplx fine = integrate(2 * panels);
    residual = std::abs(fine - coarse);
    if (residual <= rel_tol * std::abs(fine) || residual <= 1e-15) return {fine, static_cast<int>(2 * panels), residual};
    panels *= 2;
    coarse = fine;
  }
  throw numeric_failure("continuous_symbol: no convergence after 12 doublings, residual " + std::to_string(residual));
}

inline cplx continuous_symbol(const PolynomialFamily& fam, double N, const std::vector<double>& zeta,
                              double rel_tol = 1e-12) {
  return continuous_symbol_detail(fam, N, zeta, rel_tol).value;
}

// ---------------------------------------------------------------------------
// Major-arc approximation scan

struct ArcScanPoint {
  std::vector<double> xi;
  cplx m;            // m_{N,w}(xi)
  cplx model;        // G^x(theta) m~(xi - theta)
  double error = 0;  // |m - model|
};

struct ArcScanReport {
  cplx gauss;
  std::vector<ArcScanPoint> points;
  double max_error = 0.0;
  double comparison_scale = 0.0;  // 2^{kl} (1 + max_i radius_i N^{d_i})
};

/// Scans |m_{N,w}(xi) - G^x(theta) m~(xi - theta)| over a product grid of
/// `grid` points per coordinate with |xi_i - theta_i| <= radius_i, where
/// theta = a/q.
inline ArcScanReport major_arc_scan(const WeightFunction& w, const PolynomialFamily& fam, double N,
                                    const std::vector<std::int64_t>& a, std::int64_t q,
                                    const std::vector<double>& radii, int grid) {
  const std::size_t k = fam.size();
  require(a.size() == k && radii.size() == k, "major_arc_scan: theta and radii need one entry per polynomial");
  require(q >= 1, "major_arc_scan: q must be >= 1");
  require(grid >= 1 && std::pow(static_cast<double>(grid), static_cast<double>(k)) <= 1e6,
          "major_arc_scan: grid must be >= 1 with at most 10^6 points");
  std::int64_t g = q;
  for (auto ai : a) g = std::gcd(g, mod_floor(ai, q));
  require(g == 1, "major_arc_scan: theta = a/q must be jointly reduced");
  const double max_radius = 1.0 / (2.0 * static_cast<double>(q) * static_cast<double>(q));
  int l = 0;
  for (std::size_t i = 0; i < k; ++i) {
    require(radii[i] >= 0.0, "major_arc_scan: radii must be non-negative");
    if (radii[i] > max_radius)
      throw invalid_input("major_arc_scan: radius " + std::to_string(radii[i]) + " exceeds 1/(2q^2) = " +
                          std::to_string(max_radius) + " and spans several arcs");
    l = std::max(l, height_level(RationalFrequency::reduce(a[i], q).q));
  }

  ArcScanReport rep;
  rep.gauss = gauss_sum(fam, a, q);
  double reach = 0.0;
  for (std::size_t i = 0; i < k; ++i) reach = std::max(reach, radii[i] * std::pow(N, fam.degree(i)));
  rep.comparison_scale = std::ldexp(1.0, static_cast<int>(k) * l) * (1.0 + reach);

  const SampledWeight sw(w, N);
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= static_cast<std::size_t>(grid);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<double> eta(k);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = static_cast<double>(rest % static_cast<std::size_t>(grid));
      rest /= static_cast<std::size_t>(grid);
      eta[i] = grid == 1 ? 0.0 : radii[i] * (-1.0 + 2.0 * j / (grid - 1));
    }
    ArcScanPoint pt;
    pt.m = exp_sum_m(sw, fam, a, q, eta);
    pt.model = rep.gauss * continuous_symbol(fam, N, eta, 1e-12);
    pt.error = std::abs(pt.m - pt.model);
    for (std::size_t i = 0; i < k; ++i)
      pt.xi.push_back(static_cast<double>(mod_floor(a[i], q)) / static_cast<double>(q) + eta[i]);
    rep.max_error = std::max(rep.max_error, pt.error);
    rep.points.push_back(std::move(pt));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Ionescu-Wainger power and projections

/// C log N (log log log N / log log N), logarithms base 2.
inline double iw_constant(double C, double N) {
  require(C > 0.0, "iw_constant: C must be positive");
  require(N >= 100.0, "iw_constant: N must be >= 100");
  const double l1 = std::log2(N), l2 = std::log2(l1), l3 = std::log2(l2);
  return C * l1 * (l3 / l2);
}

/// Smooth even cutoff: 1 on [-1/2, 1/2], 0 outside [-1, 1].
inline double eta(double x) {
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double t = 2.0 - 2.0 * std::abs(x);
  if (t >= 1.0) return 1.0;
  if (t <= 0.0) return 0.0;
  const double a = psi(t), b = psi(1.0 - t);
  return a / (a + b);
}

/// Fourier multiplier sum_{b/q in FareySet(l)} eta((t/Q - b/q) / 2^k) on Z/QZ.
inline std::vector<double> projection_multiplier(std::int64_t Q, int level, int k_scale) {
  require(Q >= 1 && (Q & (Q - 1)) == 0, "projection_pi: Q must be a power of two");
  require(std::ldexp(1.0, k_scale) * static_cast<double>(Q) >= 1.0, "projection_pi: arcs narrower than 1/Q");
  const auto farey = farey_set(level);
  const double radius = std::ldexp(1.0, k_scale);
  const double gap = farey_min_gap(farey);
  if (radius >= gap)
    throw invalid_input("projection_pi: arc radius 2^" + std::to_string(k_scale) +
                        " reaches a neighbouring centre (minimal Farey gap " + std::to_string(gap) + ")");
  std::vector<double> m(static_cast<std::size_t>(Q), 0.0);
  for (const auto& c : farey.members) {
    // t/Q - b/q = (t q - b Q) / (q Q)
    const double centre = static_cast<double>(c.b) * static_cast<double>(Q) / static_cast<double>(c.q);
    const auto t_lo = static_cast<std::int64_t>(std::floor(centre - radius * static_cast<double>(Q))) - 1;
    const auto t_hi = static_cast<std::int64_t>(std::ceil(centre + radius * static_cast<double>(Q))) + 1;
    for (std::int64_t t = t_lo; t <= t_hi; ++t) {
      const double dist = static_cast<double>(t * c.q - c.b * Q) / static_cast<double>(c.q * Q);
      m[static_cast<std::size_t>(mod_floor(t, Q))] += eta(dist / radius);
    }
  }
  return m;
}

/// Pi_{<=l, <=k} applied to a function on Z/QZ.
inline CyclicSignal projection_pi(const CyclicSignal& f, int level, int k_scale) {
  const auto mult = projection_multiplier(f.modulus(), level, k_scale);
  auto spec = f.dft();
  // the multiplier is even in t, so the sign convention of the frequency does not matter
  for (std::size_t t = 0; t < spec.size(); ++t) spec[t] *= mult[t];
  return CyclicSignal::from_dft(std::move(spec));
}

/// Pi on a finitely supported signal through a power-of-two cyclic embedding.
/// The period is at least four times the support width so that the wrapped
/// kernel does not fold back onto the support.
inline SignalZ projection_pi(const SignalZ& f, int level, int k_scale, std::int64_t min_period = 0) {
  if (f.empty()) return {};
  std::int64_t Q = 1;
  const auto width = static_cast<std::int64_t>(f.size());
  while (Q < 4 * width || Q < min_period || std::ldexp(1.0, k_scale) * static_cast<double>(Q) < 1.0) Q <<= 1;
  require(Q <= kMaxOutputWindow, "projection_pi: embedding period exceeds 2^26");
  // centre the support inside the period
  const std::int64_t start = f.offset() - (Q - width) / 2;
  auto g = CyclicSignal::zeros(Q);
  for (std::int64_t x = f.offset(); x < f.end(); ++x) g[x - start] = f(x);
  auto h = projection_pi(g, level, k_scale);
  std::vector<cplx> v(static_cast<std::size_t>(Q));
  for (std::int64_t i = 0; i < Q; ++i) v[static_cast<std::size_t>(i)] = h[i];
  return SignalZ(start, std::move(v));
}

}  // namespace elab
