#pragma once

// Complex functions on Z/QZ and averaging operators on the cyclic model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ergodic_lab/core.hpp"
#include "ergodic_lab/fft.hpp"
#include "ergodic_lab/polynomial.hpp"

namespace elab {

class CyclicSignal {
 public:
  CyclicSignal() = default;
  explicit CyclicSignal(std::vector<cplx> values) : v_(std::move(values)) {
    require(!v_.empty(), "CyclicSignal: modulus must be positive");
  }
  static CyclicSignal zeros(std::int64_t modulus) {
    require(modulus >= 1, "CyclicSignal: modulus must be positive");
    return CyclicSignal(std::vector<cplx>(static_cast<std::size_t>(modulus)));
  }
  static CyclicSignal constant(std::int64_t modulus, cplx c) {
    auto s = zeros(modulus);
    for (auto& z : s.v_) z = c;
    return s;
  }
  static CyclicSignal delta(std::int64_t modulus, std::int64_t at) {
    auto s = zeros(modulus);
    s[at] = 1.0;
    return s;
  }
  /// x -> e(t x / Q) (paper sign convention).
  static CyclicSignal tone(std::int64_t modulus, std::int64_t t) {
    auto s = zeros(modulus);
    for (std::int64_t x = 0; x < modulus; ++x) s.v_[static_cast<std::size_t>(x)] = e_ratio(static_cast<std::int64_t>((static_cast<i128>(t) * x) % modulus), modulus);
    return s;
  }

  std::int64_t modulus() const { return static_cast<std::int64_t>(v_.size()); }
  const std::vector<cplx>& values() const { return v_; }
  cplx operator[](std::int64_t x) const { return v_[static_cast<std::size_t>(mod_floor(x, modulus()))]; }
  cplx& operator[](std::int64_t x) { return v_[static_cast<std::size_t>(mod_floor(x, modulus()))]; }

  /// (E_x |f|^p)^(1/p) with the normalized counting measure; p = inf gives max.
  double lp_norm(double p) const {
    if (std::isinf(p)) {
      double m = 0.0;
      for (auto z : v_) m = std::max(m, std::abs(z));
      return m;
    }
    CompensatedSum<double> acc;
    for (auto z : v_) acc.add(std::pow(std::abs(z), p));
    return std::pow(acc.value() / static_cast<double>(v_.size()), 1.0 / p);
  }

  /// F f(xi) = sum_x f(x) e(x xi / Q).
  std::vector<cplx> dft() const {
    auto a = v_;
    fft::forward(a);
    return a;
  }
  static CyclicSignal from_dft(std::vector<cplx> spectrum) {
    fft::inverse(spectrum);
    return CyclicSignal(std::move(spectrum));
  }

 private:
  std::vector<cplx> v_;
};

/// y -> (1/|S|) sum_{n in S} prod_i g_i(y - P_i(n) mod Q) for an explicit index set S.
inline CyclicSignal cyclic_average(const PolynomialFamily& fam, const std::vector<CyclicSignal>& g,
                                   const std::vector<std::int64_t>& index_set, double normalizer) {
  require(g.size() == fam.size(), "cyclic average: expected " + std::to_string(fam.size()) + " signals");
  const std::int64_t q = g.front().modulus();
  for (const auto& s : g) require(s.modulus() == q, "cyclic average: mismatched moduli");
  std::vector<std::vector<std::int64_t>> shifts;
  shifts.reserve(index_set.size());
  for (auto n : index_set) {
    std::vector<std::int64_t> s;
    for (const auto& p : fam) s.push_back(p.mod(n, q));
    shifts.push_back(std::move(s));
  }
  auto out = CyclicSignal::zeros(q);
  const double inv = 1.0 / normalizer;
  for (std::int64_t y = 0; y < q; ++y) {
    cplx acc = 0.0;
    for (const auto& s : shifts) {
      cplx prod = 1.0;
      for (std::size_t i = 0; i < g.size(); ++i) prod *= g[i][y - s[i]];
      acc += prod;
    }
    out[y] = acc * inv;
  }
  return out;
}

/// Truncated unweighted average on Z/QZ: (1/floor N0) sum_{n in J_N0}.
inline CyclicSignal cyclic_truncated_average(const PolynomialFamily& fam, const std::vector<CyclicSignal>& g,
                                             std::int64_t n0) {
  require(n0 >= 1, "cyclic truncated average: N0 must be >= 1");
  std::vector<std::int64_t> idx;
  for (std::int64_t n = n0 / 2 + 1; n <= n0; ++n) idx.push_back(n);
  return cyclic_average(fam, g, idx, static_cast<double>(n0));
}

}  // namespace elab
