#pragma once

// Weight functions: unit, von Mangoldt, the Cramer and Heath-Brown models of
// Lambda, the scale-linked Cramer weight Lambda_N, and pointwise differences.

#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ergodic_lab/arithmetic.hpp"
#include "ergodic_lab/core.hpp"

namespace elab {

/// Primes p <= omega (omega real).
inline std::vector<std::uint64_t> primes_up_to(double omega) {
  std::vector<std::uint64_t> out;
  if (omega < 2.0) return out;
  const auto lim = static_cast<std::uint64_t>(std::floor(omega));
  std::vector<bool> composite(lim + 1, false);
  for (std::uint64_t i = 2; i <= lim; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= lim; j += i) composite[j] = true;
  }
  return out;
}

/// W = prod_{p <= omega} p. Rejects when W does not fit in 64 bits; callers
/// needing larger omega use the prime-by-prime path of cramer_weight.
inline std::uint64_t primorial(double omega) {
  require(omega >= 1.0, "primorial: omega must be >= 1");
  std::uint64_t w = 1;
  for (auto p : primes_up_to(omega)) {
    if (w > UINT64_MAX / p)
      throw invalid_input("primorial: W for omega=" + std::to_string(omega) +
                          " exceeds 64 bits; use the factored (prime-by-prime) gcd path");
    w *= p;
  }
  return w;
}

/// W / phi(W) = prod_{p <= omega} p / (p - 1), as a product of ratios.
inline double cramer_prefactor(double omega) {
  double r = 1.0;
  for (auto p : primes_up_to(omega)) r *= static_cast<double>(p) / static_cast<double>(p - 1);
  return r;
}

/// Lambda_{Cramer, omega}(n) = (W / phi(W)) 1_{(n, W) = 1}; zero for omega = 1.
inline double cramer_weight(std::uint64_t n, double omega) {
  require(n >= 1, "cramer_weight: n must be >= 1");
  require(omega >= 1.0, "cramer_weight: omega must be >= 1");
  if (omega == 1.0) return 0.0;
  if (omega <= 52.0) {
    const std::uint64_t w = primorial(omega);
    return std::gcd(n, w) == 1 ? cramer_prefactor(omega) : 0.0;
  }
  for (auto p : primes_up_to(omega))
    if (n % p == 0) return 0.0;
  return cramer_prefactor(omega);
}

/// Lambda_{HB, omega}(n) = sum_{q < omega} mu(q) / phi(q) c_q(n). With a
/// truncation exponent eps the value is zeroed where |value| > omega^(c * eps).
inline double heath_brown_weight(std::uint64_t n, double omega, std::optional<double> eps = std::nullopt,
                                 double c_circ = 0.1) {
  require(n >= 1, "heath_brown_weight: n must be >= 1");
  require(omega >= 1.0, "heath_brown_weight: omega must be >= 1");
  double acc = 0.0;
  for (std::uint64_t q = 1; static_cast<double>(q) < omega; ++q) {
    const int m = moebius(q);
    if (m == 0) continue;
    acc += m / static_cast<double>(totient(q)) * ramanujan_sum(q, static_cast<std::int64_t>(n));
  }
  if (eps && std::abs(acc) > std::pow(omega, c_circ * *eps)) return 0.0;
  return acc;
}

/// omega = exp(Log(N)^(1/C0)) for the scale-linked weight Lambda_N.
inline double scale_linked_omega(double scale, int c0) {
  require(scale >= 2.0, "scale_linked_cramer: N must be >= 2");
  require(c0 >= 2, "scale_linked_cramer: C0 must be >= 2");
  return std::exp(std::pow(static_cast<double>(log_scale(scale)), 1.0 / c0));
}

inline double scale_linked_cramer(std::uint64_t n, double scale, int c0) {
  return cramer_weight(n, scale_linked_omega(scale, c0));
}

/// Closed description of a weight w : Z_+ -> R.
class WeightFunction {
 public:
  enum class Kind { Unit, VonMangoldt, Cramer, HeathBrown, HeathBrownTruncated, ScaleLinkedCramer, Difference };

  static WeightFunction unit() { return WeightFunction(Kind::Unit); }
  static WeightFunction von_mangoldt() { return WeightFunction(Kind::VonMangoldt); }
  static WeightFunction cramer(double omega) {
    require(omega >= 1.0, "Cramer weight: omega must be >= 1");
    WeightFunction w(Kind::Cramer);
    w.omega_ = omega;
    return w;
  }
  static WeightFunction heath_brown(double omega) {
    require(omega >= 1.0, "Heath-Brown weight: omega must be >= 1");
    WeightFunction w(Kind::HeathBrown);
    w.omega_ = omega;
    return w;
  }
  static WeightFunction heath_brown_truncated(double omega, double eps, double c_circ = 0.1) {
    require(omega >= 1.0 && eps > 0.0 && c_circ > 0.0, "truncated Heath-Brown weight: need omega >= 1, eps > 0, c > 0");
    WeightFunction w(Kind::HeathBrownTruncated);
    w.omega_ = omega;
    w.eps_ = eps;
    w.c_circ_ = c_circ;
    return w;
  }
  /// Lambda_N; the scale N is the one supplied at evaluation time.
  static WeightFunction scale_linked(int c0 = 4) {
    require(c0 >= 2, "scale-linked Cramer weight: C0 must be >= 2");
    WeightFunction w(Kind::ScaleLinkedCramer);
    w.c0_ = c0;
    return w;
  }
  static WeightFunction difference(WeightFunction left, WeightFunction right) {
    WeightFunction w(Kind::Difference);
    w.left_ = std::make_shared<const WeightFunction>(std::move(left));
    w.right_ = std::make_shared<const WeightFunction>(std::move(right));
    return w;
  }

  /// Parses "unit", "mangoldt", "cramer:5", "hb:16", "hbt:16:0.5[:0.1]",
  /// "lambdaN[:4]", "diff(A,B)".
  static WeightFunction parse(const std::string& spec);

  Kind kind() const { return kind_; }
  double omega() const { return omega_; }
  int c0() const { return c0_; }
  bool needs_scale() const {
    if (kind_ == Kind::ScaleLinkedCramer) return true;
    if (kind_ == Kind::Difference) return left_->needs_scale() || right_->needs_scale();
    return false;
  }

  /// w(n); scale is the averaging scale N, used by Lambda_N only.
  double operator()(std::uint64_t n, double scale = 0.0) const {
    require(n >= 1, "weight evaluated at n < 1");
    switch (kind_) {
      case Kind::Unit: return 1.0;
      case Kind::VonMangoldt: return mangoldt(n);
      case Kind::Cramer: return cramer_weight(n, omega_);
      case Kind::HeathBrown: return heath_brown_weight(n, omega_);
      case Kind::HeathBrownTruncated: return heath_brown_weight(n, omega_, eps_, c_circ_);
      case Kind::ScaleLinkedCramer: return scale_linked_cramer(n, scale, c0_);
      case Kind::Difference: return (*left_)(n, scale) - (*right_)(n, scale);
    }
    return 0.0;
  }

  /// Values w(lo), ..., w(hi), sieve-backed.
  std::vector<double> table(std::uint64_t lo, std::uint64_t hi, double scale = 0.0) const;

  std::string to_string() const;

 private:
  explicit WeightFunction(Kind k) : kind_(k) {}

  static std::vector<double> cramer_table(std::uint64_t lo, std::uint64_t hi, double omega);
  static std::vector<double> heath_brown_table(std::uint64_t lo, std::uint64_t hi, double omega);

  Kind kind_;
  double omega_ = 1.0;
  double eps_ = 0.0;
  double c_circ_ = 0.1;
  int c0_ = 4;
  std::shared_ptr<const WeightFunction> left_, right_;
};

/// Lambda(n) for n in [lo, hi] via an Eratosthenes sieve up to hi.
inline std::vector<double> mangoldt_table(std::uint64_t lo, std::uint64_t hi) {
  require(lo >= 1 && lo <= hi, "mangoldt_table: need 1 <= lo <= hi");
  std::vector<double> out(hi - lo + 1, 0.0);
  std::vector<bool> composite(hi + 1, false);
  for (std::uint64_t p = 2; p <= hi; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t j = p * p; j <= hi; j += p) composite[j] = true;
    const double lp = std::log(static_cast<double>(p));
    for (std::uint64_t pk = p;; pk *= p) {
      if (pk >= lo) out[pk - lo] = lp;
      if (pk > hi / p) break;
    }
  }
  return out;
}

inline std::vector<double> WeightFunction::cramer_table(std::uint64_t lo, std::uint64_t hi, double omega) {
  std::vector<double> out(hi - lo + 1, 0.0);
  if (omega == 1.0) return out;
  const double pref = cramer_prefactor(omega);
  std::vector<char> coprime(out.size(), 1);
  for (auto p : primes_up_to(omega)) {
    const std::uint64_t first = (lo + p - 1) / p * p;
    for (std::uint64_t m = first; m <= hi; m += p) coprime[m - lo] = 0;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coprime[i] ? pref : 0.0;
  return out;
}

inline std::vector<double> WeightFunction::heath_brown_table(std::uint64_t lo, std::uint64_t hi, double omega) {
  std::vector<double> out(hi - lo + 1, 0.0);
  for (std::uint64_t q = 1; static_cast<double>(q) < omega; ++q) {
    const int m = moebius(q);
    if (m == 0) continue;
    const double coef = m / static_cast<double>(totient(q));
    std::vector<double> period(q);
    for (std::uint64_t r = 0; r < q; ++r) period[r] = coef * ramanujan_sum(q, static_cast<std::int64_t>(r));
    for (std::uint64_t n = lo; n <= hi; ++n) out[n - lo] += period[n % q];
  }
  return out;
}

inline std::vector<double> WeightFunction::table(std::uint64_t lo, std::uint64_t hi, double scale) const {
  require(lo >= 1 && lo <= hi, "weight table: need 1 <= lo <= hi");
  switch (kind_) {
    case Kind::Unit: return std::vector<double>(hi - lo + 1, 1.0);
    case Kind::VonMangoldt: return mangoldt_table(lo, hi);
    case Kind::Cramer: return cramer_table(lo, hi, omega_);
    case Kind::HeathBrown: return heath_brown_table(lo, hi, omega_);
    case Kind::HeathBrownTruncated: {
      auto t = heath_brown_table(lo, hi, omega_);
      const double cut = std::pow(omega_, c_circ_ * eps_);
      for (auto& v : t)
        if (std::abs(v) > cut) v = 0.0;
      return t;
    }
    case Kind::ScaleLinkedCramer: return cramer_table(lo, hi, scale_linked_omega(scale, c0_));
    case Kind::Difference: {
      auto a = left_->table(lo, hi, scale);
      auto b = right_->table(lo, hi, scale);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
      return a;
    }
  }
  return {};
}

inline std::string WeightFunction::to_string() const {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
  };
  switch (kind_) {
    case Kind::Unit: return "unit";
    case Kind::VonMangoldt: return "mangoldt";
    case Kind::Cramer: return "cramer:" + num(omega_);
    case Kind::HeathBrown: return "hb:" + num(omega_);
    case Kind::HeathBrownTruncated: return "hbt:" + num(omega_) + ":" + num(eps_) + ":" + num(c_circ_);
    case Kind::ScaleLinkedCramer: return "lambdaN:" + std::to_string(c0_);
    case Kind::Difference: return "diff(" + left_->to_string() + "," + right_->to_string() + ")";
  }
  return "";
}

inline WeightFunction WeightFunction::parse(const std::string& spec) {
  auto fields = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
      auto end = s.find(':', start);
      out.push_back(s.substr(start, end == std::string::npos ? std::string::npos : end - start));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return out;
  };
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw invalid_input("");
      return v;
    } catch (const std::exception&) {
      throw invalid_input("weight '" + spec + "': bad number '" + s + "'");
    }
  };
  if (spec.rfind("diff(", 0) == 0 && spec.back() == ')') {
    const std::string inner = spec.substr(5, spec.size() - 6);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (inner[i] == ',' && depth == 0)
        return difference(parse(inner.substr(0, i)), parse(inner.substr(i + 1)));
    }
    throw invalid_input("weight '" + spec + "': diff needs two arguments");
  }
  auto f = fields(spec);
  const std::string& name = f[0];
  if (name == "unit" && f.size() == 1) return unit();
  if (name == "mangoldt" && f.size() == 1) return von_mangoldt();
  if (name == "cramer" && f.size() == 2) return cramer(number(f[1]));
  if (name == "hb" && f.size() == 2) return heath_brown(number(f[1]));
  if (name == "hbt" && (f.size() == 3 || f.size() == 4))
    return heath_brown_truncated(number(f[1]), number(f[2]), f.size() == 4 ? number(f[3]) : 0.1);
  if (name == "lambdaN" && f.size() <= 2) return scale_linked(f.size() == 2 ? static_cast<int>(number(f[1])) : 4);
  throw invalid_input("unknown weight '" + spec + "'");
}

struct WeightStatistics {
  double mean = 0.0;
  std::optional<double> residue_mean;
  std::optional<double> residue_target;  // 1_{(b,q)=1} / phi(q)
  std::optional<double> moment;          // E |w|^k
  std::optional<double> moment_bound;    // <Log omega>^(2^k + k), Heath-Brown weights only
};

/// Mean of w over [N], optionally the mean of w 1_{n = b mod q} and the k-th
/// absolute moment.
inline WeightStatistics weight_statistics(const WeightFunction& w, std::uint64_t n_max,
                                          std::optional<std::uint64_t> modulus = std::nullopt,
                                          std::optional<std::uint64_t> residue = std::nullopt,
                                          std::optional<int> moment = std::nullopt, double scale = 0.0) {
  require(n_max >= 1, "weight_statistics: N must be >= 1");
  require(modulus.has_value() == residue.has_value(), "weight_statistics: modulus and residue go together");
  if (modulus) require(*modulus >= 1 && *residue >= 1 && *residue <= *modulus, "weight_statistics: need 1 <= b <= q");
  if (moment) require(*moment >= 1 && *moment <= 8, "weight_statistics: moment k must lie in [1, 8]");
  if (w.needs_scale() && scale == 0.0) scale = static_cast<double>(n_max);
  const auto t = w.table(1, n_max, scale);
  const double inv = 1.0 / static_cast<double>(n_max);
  WeightStatistics r;
  r.mean = parallel_sum<double>(t.size(), [&](std::size_t i) { return t[i]; }) * inv;
  if (modulus) {
    const std::uint64_t q = *modulus, b = *residue % q;
    r.residue_mean = parallel_sum<double>(t.size(), [&](std::size_t i) { return (i + 1) % q == b ? t[i] : 0.0; }) * inv;
    r.residue_target = std::gcd(*residue, q) == 1 ? 1.0 / static_cast<double>(totient(q)) : 0.0;
  }
  if (moment) {
    const int k = *moment;
    r.moment = parallel_sum<double>(t.size(), [&](std::size_t i) { return std::pow(std::abs(t[i]), k); }) * inv;
    if (w.kind() == WeightFunction::Kind::HeathBrown || w.kind() == WeightFunction::Kind::HeathBrownTruncated) {
      const double lw = w.omega() >= 1.0 ? log_scale(w.omega()) : 0.0;
      r.moment_bound = std::pow(bracket(lw), std::ldexp(1.0, k) + k);
    }
  }
  return r;
}

}  // namespace elab
