#pragma once

// r-variation seminorms V^r and norms bold-V^r of finite sequences, lacunary
// scale sets, and an empirical harness for the multilinear
// Rademacher-Menshov inequality on cyclic groups.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ergodic_lab/core.hpp"
#include "ergodic_lab/cyclic.hpp"
#include "ergodic_lab/polynomial.hpp"

namespace elab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct VariationValue {
  double seminorm = 0.0;  // V^r
  double norm = 0.0;      // bold-V^r = sup |a_t| + V^r
};

/// Largest sequence length accepted by the O(J^2) chain DP.
inline constexpr std::size_t kMaxVariationLength = 10000;

/// Exact V^r by the chain DP best[i] = max_{j<i} best[j] + |a_i - a_j|^r;
/// r = inf uses the largest pairwise difference.
template <class T>
VariationValue variation_norm(const std::vector<T>& seq, double r) {
  require(r >= 1.0, "variation_norm: exponent r must be >= 1");
  require(seq.size() <= kMaxVariationLength, "variation_norm: sequence longer than 10^4");
  VariationValue out;
  double sup = 0.0;
  for (const auto& a : seq) sup = std::max(sup, static_cast<double>(std::abs(a)));
  if (std::isinf(r)) {
    double m = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) m = std::max(m, static_cast<double>(std::abs(seq[i] - seq[j])));
    out.seminorm = m;
  } else {
    std::vector<double> best(seq.size(), 0.0);
    double top = 0.0;
    for (std::size_t i = 1; i < seq.size(); ++i) {
      double b = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        const double d = static_cast<double>(std::abs(seq[i] - seq[j]));
        b = std::max(b, best[j] + (r == 1.0 ? d : r == 2.0 ? d * d : std::pow(d, r)));
      }
      best[i] = b;
      top = std::max(top, b);
    }
    out.seminorm = r == 1.0 ? top : r == 2.0 ? std::sqrt(top) : std::pow(top, 1.0 / r);
  }
  out.norm = sup + out.seminorm;
  return out;
}

/// A sequence with its V^r / bold-V^r values for a list of exponents.
struct VariationProfile {
  std::vector<cplx> sequence;
  std::vector<double> exponents;
  std::vector<double> seminorms;
  std::vector<double> norms;
};

inline VariationProfile variation_profile(std::vector<cplx> seq, std::vector<double> exponents) {
  VariationProfile p{std::move(seq), std::move(exponents), {}, {}};
  for (double r : p.exponents) {
    auto v = variation_norm(p.sequence, r);
    p.seminorms.push_back(v.seminorm);
    p.norms.push_back(v.norm);
  }
  return p;
}

/// Ascending scales >= 1 with consecutive ratios >= lambda > 1.
class LacunarySet {
 public:
  LacunarySet(std::vector<double> values, double lambda) : v_(std::move(values)), lambda_(lambda) {
    require(lambda > 1.0, "LacunarySet: lambda must exceed 1");
    for (std::size_t i = 0; i < v_.size(); ++i) {
      require(v_[i] >= 1.0, "LacunarySet: scales must be >= 1");
      if (i > 0)
        require(v_[i] >= lambda * v_[i - 1], "LacunarySet: ratio " + std::to_string(v_[i] / v_[i - 1]) +
                                                 " between consecutive scales is below lambda");
    }
  }

  /// first, first*lambda, ..., count terms.
  static LacunarySet geometric(double first, double lambda, std::size_t count) {
    std::vector<double> v;
    double x = first;
    for (std::size_t i = 0; i < count; ++i, x *= lambda) v.push_back(x);
    return LacunarySet(std::move(v), lambda);
  }

  const std::vector<double>& values() const { return v_; }
  double lambda() const { return lambda_; }

 private:
  std::vector<double> v_;
  double lambda_;
};

struct RademacherMenshovReport {
  double lhs = 0.0;         // ||(B(f_1N, ..., f_kN))_N||_{L^q(V^2)}
  double sign_max = 0.0;    // max over sign patterns of the right-hand norm
  double log_factor = 0.0;  // <Log K>^(k - 2 + k max(1, 1/q))
  double rhs = 0.0;
  double ratio = 0.0;
};

struct RademacherMenshovConfig {
  std::int64_t modulus = 64;  // Q
  std::int64_t n0 = 8;        // B = truncated unweighted average at scale N0
};

/// Same harness with caller-supplied increments inc[i][j] = f_{i,j+1} - f_{i,j}.
inline RademacherMenshovReport rm_check(const PolynomialFamily& fam, const std::vector<std::vector<CyclicSignal>>& inc,
                                        double q, RademacherMenshovConfig cfg = {}) {
  const int k = static_cast<int>(fam.size());
  require(static_cast<int>(inc.size()) == k, "rm_check: need one increment family per polynomial");
  const int K = static_cast<int>(inc.front().size());
  require(K >= 1 && k * K <= 18, "rm_check: k*K must lie in [1, 18]");
  const std::int64_t Q = inc.front().front().modulus();
  auto B = [&](const std::vector<CyclicSignal>& g) { return cyclic_truncated_average(fam, g, cfg.n0); };
  auto lq = [&](const std::vector<double>& vals) {
    CompensatedSum<double> acc;
    for (double v : vals) acc.add(std::pow(v, q));
    return std::pow(acc.value() / static_cast<double>(vals.size()), 1.0 / q);
  };

  // left side
  std::vector<std::vector<cplx>> traj(static_cast<std::size_t>(Q));
  std::vector<CyclicSignal> cum(static_cast<std::size_t>(k), CyclicSignal::zeros(Q));
  for (int N = 0; N < K; ++N) {
    for (int i = 0; i < k; ++i)
      for (std::int64_t x = 0; x < Q; ++x) cum[static_cast<std::size_t>(i)][x] += inc[static_cast<std::size_t>(i)][static_cast<std::size_t>(N)][x];
    auto b = B(cum);
    for (std::int64_t x = 0; x < Q; ++x) traj[static_cast<std::size_t>(x)].push_back(b[x]);
  }
  std::vector<double> v2(static_cast<std::size_t>(Q));
  for (std::int64_t x = 0; x < Q; ++x) v2[static_cast<std::size_t>(x)] = variation_norm(traj[static_cast<std::size_t>(x)], 2.0).norm;

  RademacherMenshovReport rep;
  rep.lhs = lq(v2);

  // right side: every sign pattern, deterministic max
  const std::uint64_t patterns = std::uint64_t{1} << (k * K);
  auto maxima = map_chunks(static_cast<std::size_t>(patterns), 256, [&](std::size_t lo, std::size_t hi) {
    double best = 0.0;
    std::vector<CyclicSignal> g(static_cast<std::size_t>(k), CyclicSignal::zeros(Q));
    std::vector<double> mags(static_cast<std::size_t>(Q));
    for (std::size_t pat = lo; pat < hi; ++pat) {
      for (int i = 0; i < k; ++i) {
        auto& gi = g[static_cast<std::size_t>(i)];
        gi = CyclicSignal::zeros(Q);
        for (int j = 0; j < K; ++j) {
          const double sgn = (pat >> (i * K + j)) & 1U ? -1.0 : 1.0;
          const auto& d = inc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          for (std::int64_t x = 0; x < Q; ++x) gi[x] += sgn * d[x];
        }
      }
      auto b = B(g);
      for (std::int64_t x = 0; x < Q; ++x) mags[static_cast<std::size_t>(x)] = std::abs(b[x]);
      best = std::max(best, lq(mags));
    }
    return best;
  });
  for (double m : maxima) rep.sign_max = std::max(rep.sign_max, m);

  const double logk = log_scale(static_cast<double>(K));
  rep.log_factor = std::pow(bracket(logk), k - 2 + k * std::max(1.0, 1.0 / q));
  rep.rhs = rep.log_factor * rep.sign_max;
  rep.ratio = (rep.lhs == 0.0 && rep.rhs == 0.0) ? 0.0 : rep.lhs / rep.rhs;
  return rep;
}


/// Compares both sides of the multilinear Rademacher-Menshov inequality for
/// B = truncated average on Z/QZ and seeded random cumulative families
/// f_{i,N} = sum_{j <= N} d_{i,j}. Signs are enumerated exhaustively.
inline RademacherMenshovReport rm_check(const PolynomialFamily& fam, int K, double q, std::uint64_t seed,
                                        RademacherMenshovConfig cfg = {}) {
  const int k = static_cast<int>(fam.size());
  require(K >= 1 && K <= 6, "rm_check: K must lie in [1, 6]");
  require(k * K <= 18, "rm_check: k*K = " + std::to_string(k * K) + " exceeds 18 (2^(kK) sign patterns)");
  require(q > 0.0 && std::isfinite(q), "rm_check: q must be positive and finite");
  require(cfg.modulus >= 2 && cfg.n0 >= 1, "rm_check: need Q >= 2 and N0 >= 1");

  std::mt19937_64 eng(seed);
  std::vector<std::vector<CyclicSignal>> inc(static_cast<std::size_t>(k));
  for (auto& fam_i : inc)
    for (int j = 0; j < K; ++j) {
      auto s = CyclicSignal::zeros(cfg.modulus);
      for (std::int64_t x = 0; x < cfg.modulus; ++x) {
        const double re = 2.0 * uniform01(eng) - 1.0;
        const double im = 2.0 * uniform01(eng) - 1.0;
        s[x] = {re, im};
      }
      fam_i.push_back(std::move(s));
    }
  return rm_check(fam, inc, q, cfg);
}

}  // namespace elab
