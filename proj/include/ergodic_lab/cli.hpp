#pragma once

// Batch front end: one subcommand per experiment, CSV or JSON tables out.
// Exit codes: 0 success, 1 invalid input, 2 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ergodic_lab/approximants.hpp"
#include "ergodic_lab/circle_method.hpp"
#include "ergodic_lab/core.hpp"
#include "ergodic_lab/csv.hpp"
#include "ergodic_lab/cyclic.hpp"
#include "ergodic_lab/ergodic.hpp"
#include "ergodic_lab/gowers.hpp"
#include "ergodic_lab/padic.hpp"
#include "ergodic_lab/polynomial.hpp"
#include "ergodic_lab/signals.hpp"
#include "ergodic_lab/variation.hpp"

namespace elab::cli {

struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> flags;
  std::uint64_t seed = 1;
  std::string output;  // empty: stdout
  std::string format = "csv";
  std::string svg;       // optional chart path
  std::string from_csv;  // replay an emitted table instead of computing
};

// ---------------------------------------------------------------------------
// value parsing

/// Reals: "0.5", "1e6", "2^20", "1/3", "sqrt(2)", "-sqrt(2)".
inline double parse_real(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw invalid_input("expected a number, got ''");
  if (s[0] == '-' && s.size() > 1 && !std::isdigit(static_cast<unsigned char>(s[1])) && s[1] != '.')
    return -parse_real(s.substr(1));
  if (s.rfind("sqrt(", 0) == 0 && s.back() == ')') {
    const double v = parse_real(s.substr(5, s.size() - 6));
    require(v >= 0.0, "sqrt of a negative number in '" + text + "'");
    return std::sqrt(v);
  }
  if (auto p = s.find('^'); p != std::string::npos) return std::pow(parse_real(s.substr(0, p)), parse_real(s.substr(p + 1)));
  if (auto p = s.find('/'); p != std::string::npos) {
    const double den = parse_real(s.substr(p + 1));
    require(den != 0.0, "division by zero in '" + text + "'");
    return parse_real(s.substr(0, p)) / den;
  }
  if (s == "inf") return kInfinity;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) throw invalid_input("expected a number, got '" + text + "'");
  return v;
}

inline std::int64_t parse_int(const std::string& text) {
  const double v = parse_real(text);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) throw invalid_input("expected an integer, got '" + text + "'");
  return static_cast<std::int64_t>(v);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

inline std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> v;
  for (const auto& t : split(s, ',')) v.push_back(parse_real(t));
  return v;
}

inline std::vector<std::int64_t> parse_ints(const std::string& s) {
  std::vector<std::int64_t> v;
  for (const auto& t : split(s, ',')) v.push_back(parse_int(t));
  return v;
}

/// "b1/q1,b2/q2,..." -> numerators over the common denominator.
inline std::pair<std::vector<std::int64_t>, std::int64_t> parse_rationals(const std::string& s) {
  std::vector<std::pair<std::int64_t, std::int64_t>> parts;
  std::int64_t q = 1;
  for (const auto& t : split(s, ',')) {
    const auto slash = t.find('/');
    const std::int64_t b = parse_int(t.substr(0, slash));
    const std::int64_t d = slash == std::string::npos ? 1 : parse_int(t.substr(slash + 1));
    require(d >= 1, "rational '" + t + "' needs a positive denominator");
    parts.emplace_back(b, d);
    q = std::lcm(q, d);
    require(q <= (std::int64_t{1} << 40), "common denominator too large");
  }
  std::vector<std::int64_t> a;
  for (auto [b, d] : parts) a.push_back(b * (q / d));
  return {a, q};
}

// ---------------------------------------------------------------------------
// subcommand table

struct FlagSpec {
  std::string name;
  std::string help;
  std::string fallback;  // empty: required
};

struct Subcommand {
  std::string name;
  std::string help;
  std::vector<FlagSpec> flags;
  std::function<csv::Table(const RunConfig&, std::ostream& err)> run;
};

namespace detail {

inline const std::string& flag(const RunConfig& c, const std::string& name) {
  auto it = c.flags.find(name);
  if (it == c.flags.end() || it->second.empty()) throw invalid_input("missing required flag --" + name);
  return it->second;
}

inline bool has(const RunConfig& c, const std::string& name) {
  auto it = c.flags.find(name);
  return it != c.flags.end() && !it->second.empty();
}

inline csv::Cell num(double v) { return v; }
inline csv::Cell integer(std::int64_t v) { return static_cast<long long>(v); }

inline SignalZ signal_from_spec(const std::string& spec, std::mt19937_64& eng) {
  const auto f = split(spec, ':');
  if (f[0] == "delta" && f.size() == 2) return SignalZ::delta(parse_int(f[1]));
  if ((f[0] == "ones" || f[0] == "random") && f.size() == 3) {
    const std::int64_t lo = parse_int(f[1]), hi = parse_int(f[2]);
    require(lo <= hi && hi - lo < kMaxOutputWindow, "signal '" + spec + "': need lo <= hi within 2^26 points");
    std::vector<cplx> v(static_cast<std::size_t>(hi - lo + 1), 1.0);
    if (f[0] == "random")
      for (auto& z : v) {
        const double re = 2.0 * uniform01(eng) - 1.0, im = 2.0 * uniform01(eng) - 1.0;
        z = {re, im};
      }
    return SignalZ(lo, std::move(v));
  }
  return signal_from_table(csv::read_file(spec));
}

inline std::vector<SignalZ> signals_from_spec(const std::string& spec, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<SignalZ> out;
  for (const auto& s : split(spec, ';')) out.push_back(signal_from_spec(s, eng));
  return out;
}

inline CyclicSignal cyclic_from_spec(const std::string& spec, std::int64_t Q, std::uint64_t seed) {
  const auto f = split(spec, ':');
  if (f[0] == "tone" && f.size() == 2) return CyclicSignal::tone(Q, parse_int(f[1]));
  if (f[0] == "delta" && f.size() == 2) return CyclicSignal::delta(Q, parse_int(f[1]));
  if (f[0] == "ones" && f.size() == 1) return CyclicSignal::constant(Q, 1.0);
  if (f[0] == "random" && f.size() == 1) {
    std::mt19937_64 eng(seed);
    auto g = CyclicSignal::zeros(Q);
    for (std::int64_t x = 0; x < Q; ++x) {
      const double re = 2.0 * uniform01(eng) - 1.0, im = 2.0 * uniform01(eng) - 1.0;
      g[x] = {re, im};
    }
    return g;
  }
  const auto z = signal_from_table(csv::read_file(spec));
  auto g = CyclicSignal::zeros(Q);
  for (std::int64_t x = z.offset(); x < z.end(); ++x) g[x] += z(x);
  return g;
}

inline std::vector<TrigPolynomial> funcs_from_spec(const std::string& spec) {
  std::vector<TrigPolynomial> out;
  for (const auto& s : split(spec, ';')) out.push_back(TrigPolynomial::parse(s));
  return out;
}

inline bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw invalid_input("expected a boolean, got '" + s + "'");
}

inline csv::Table table_of_signal(const SignalZ& f) { return to_table(f); }

inline std::vector<std::string> indexed(const std::string& stem, std::size_t k, std::size_t first = 1) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(stem + std::to_string(i + first));
  return v;
}

// --- handlers ---------------------------------------------------------------

inline csv::Table run_weights(const RunConfig& c) {
  const auto w = WeightFunction::parse(flag(c, "weight"));
  const auto N = parse_int(flag(c, "N"));
  require(N >= 1, "--N must be >= 1");
  std::optional<std::uint64_t> modulus, residue;
  std::optional<int> moment;
  if (has(c, "modulus")) modulus = static_cast<std::uint64_t>(parse_int(flag(c, "modulus")));
  if (has(c, "residue")) residue = static_cast<std::uint64_t>(parse_int(flag(c, "residue")));
  if (has(c, "moment")) moment = static_cast<int>(parse_int(flag(c, "moment")));
  const double scale = has(c, "scale") ? parse_real(flag(c, "scale")) : 0.0;
  const auto st = weight_statistics(w, static_cast<std::uint64_t>(N), modulus, residue, moment, scale);
  csv::Table t{{"N", "mean"}, {{integer(N), num(st.mean)}}};
  if (st.residue_mean) {
    t.columns.insert(t.columns.end(), {"residue_mean", "residue_target"});
    t.rows[0].push_back(num(*st.residue_mean));
    t.rows[0].push_back(num(*st.residue_target));
  }
  if (st.moment) {
    t.columns.insert(t.columns.end(), {"moment", "moment_bound"});
    t.rows[0].push_back(num(*st.moment));
    t.rows[0].push_back(num(*st.moment_bound));
  }
  return t;
}

inline csv::Table run_unorm(const RunConfig& c) {
  auto w = WeightFunction::parse(flag(c, "weight"));
  const auto N = parse_int(flag(c, "N"));
  const int s = static_cast<int>(parse_int(flag(c, "degree")));
  UNormOptions opt;
  if (has(c, "steps")) opt.steps = parse_reals(flag(c, "steps"));
  opt.oversample = static_cast<int>(parse_int(flag(c, "oversample")));
  const auto est = has(c, "minus") ? weight_unorm_gap(w, WeightFunction::parse(flag(c, "minus")), N, s, opt)
                                   : weight_unorm_gap(w, WeightFunction::unit(), N, s, opt);
  csv::Table t{{"lower_bound", "additive_error", "upper_bound"}, {{num(est.lower_bound), num(est.additive_error),
                                                                  num(est.upper_bound())}}};
  for (std::size_t j = 0; j < est.witness.size(); ++j) {
    t.columns.push_back("witness_" + std::to_string(j));
    t.rows[0].push_back(num(est.witness[j]));
  }
  return t;
}

/// Either the single point --xi or --points samples of coordinate 1 over [0, 1).
inline std::vector<std::vector<double>> frequency_points(const RunConfig& c, const std::string& key, std::size_t k) {
  auto base = parse_reals(flag(c, key));
  require(base.size() == k, "--" + key + " needs " + std::to_string(k) + " components");
  const auto points = parse_int(flag(c, "points"));
  require(points >= 0 && points <= 1000000, "--points must lie in [0, 10^6]");
  if (points == 0) return {base};
  std::vector<std::vector<double>> out;
  for (std::int64_t i = 0; i < points; ++i) {
    auto v = base;
    v[0] = static_cast<double>(i) / static_cast<double>(points);
    out.push_back(v);
  }
  return out;
}

inline csv::Table run_expsum(const RunConfig& c) {
  const auto w = WeightFunction::parse(flag(c, "weight"));
  const auto fam = PolynomialFamily::parse(flag(c, "family"));
  const double N = parse_real(flag(c, "N"));
  const SampledWeight sw(w, N);
  csv::Table t{indexed("xi_", fam.size()), {}};
  t.columns.insert(t.columns.end(), {"re", "im", "abs"});
  for (const auto& xi : frequency_points(c, "xi", fam.size())) {
    const cplx m = exp_sum_m(sw, fam, xi);
    std::vector<csv::Cell> row(xi.begin(), xi.end());
    row.insert(row.end(), {num(m.real()), num(m.imag()), num(std::abs(m))});
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline csv::Table run_symbol(const RunConfig& c) {
  const auto fam = PolynomialFamily::parse(flag(c, "family"));
  const double N = parse_real(flag(c, "N"));
  const double tol = parse_real(flag(c, "rel-tol"));
  csv::Table t{indexed("zeta_", fam.size()), {}};
  t.columns.insert(t.columns.end(), {"re", "im", "abs"});
  for (const auto& z : frequency_points(c, "zeta", fam.size())) {
    const cplx m = continuous_symbol(fam, N, z, tol);
    std::vector<csv::Cell> row(z.begin(), z.end());
    row.insert(row.end(), {num(m.real()), num(m.imag()), num(std::abs(m))});
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline csv::Table run_arcscan(const RunConfig& c) {
  const auto w = WeightFunction::parse(flag(c, "weight"));
  const auto fam = PolynomialFamily::parse(flag(c, "family"));
  const double N = parse_real(flag(c, "N"));
  const auto [a, q] = parse_rationals(flag(c, "theta"));
  std::vector<double> radii;
  if (has(c, "radii")) {
    radii = parse_reals(flag(c, "radii"));
  } else {
    const double scale = parse_real(flag(c, "radius-scale"));
    for (std::size_t i = 0; i < fam.size(); ++i) radii.push_back(scale / std::pow(N, fam.degree(i)));
  }
  const auto rep = major_arc_scan(w, fam, N, a, q, radii, static_cast<int>(parse_int(flag(c, "grid"))));
  csv::Table t{indexed("xi_", fam.size()), {}};
  t.columns.insert(t.columns.end(), {"re", "im", "abs", "err"});
  for (const auto& p : rep.points) {
    std::vector<csv::Cell> row(p.xi.begin(), p.xi.end());
    row.insert(row.end(), {num(p.m.real()), num(p.m.imag()), num(std::abs(p.m)), num(p.error)});
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline csv::Table run_gauss(const RunConfig& c) {
  const auto fam = PolynomialFamily::parse(flag(c, "family"));
  const auto a = parse_ints(flag(c, "a"));
  const auto q = parse_int(flag(c, "q"));
  const cplx g = gauss_sum(fam, a, q);
  return {{"re", "im", "abs"}, {{num(g.real()), num(g.imag()), num(std::abs(g))}}};
}

inline csv::Table run_average(const RunConfig& c, bool dual) {
  const auto w = WeightFunction::parse(flag(c, "weight"));
  const auto fam = PolynomialFamily::parse(flag(c, "family"));
  const double N = parse_real(flag(c, "N"));
  const auto sig = signals_from_spec(flag(c, "signals"), c.seed);
  const bool truncated = parse_bool(flag(c, "truncated"));
  if (!dual) return table_of_signal(multi_average(w, fam, sig, N, truncated));
  const auto j = parse_int(flag(c, "j"));
  require(j >= 1, "--j must be >= 1");
  return table_of_signal(dual_average(static_cast<std::size_t>(j), w, fam, sig, N, truncated));
}

inline csv::Table run_variation(const RunConfig& c) {
  std::vector<double> seq;
  if (has(c, "sequence")) {
    seq = parse_reals(flag(c, "sequence"));
  } else {
    const auto len = parse_int(flag(c, "random-length"));
    require(len >= 0 && static_cast<std::size_t>(len) <= kMaxVariationLength, "--random-length must lie in [0, 10^4]");
    std::mt19937_64 eng(c.seed);
    for (std::int64_t i = 0; i < len; ++i) seq.push_back(2.0 * uniform01(eng) - 1.0);
  }
  csv::Table t{{"r", "V", "Vbold"}, {}};
  for (double r : parse_reals(flag(c, "exponents"))) {
    const auto v = variation_norm(seq, r);
    t.rows.push_back({num(r), num(v.seminorm), num(v.norm)});
  }
  return t;
}

inline csv::Table run_rmcheck(const RunConfig& c) {
  const auto fam = PolynomialFamily::parse(flag(c, "family"));
  RademacherMenshovConfig cfg;
  cfg.modulus = parse_int(flag(c, "Q"));
  cfg.n0 = parse_int(flag(c, "N0"));
  const auto rep = rm_check(fam, static_cast<int>(parse_int(flag(c, "K"))), parse_real(flag(c, "q")), c.seed, cfg);
  return {{"lhs", "sign_max", "log_factor", "rhs", "ratio"},
          {{num(rep.lhs), num(rep.sign_max), num(rep.log_factor), num(rep.rhs), num(rep.ratio)}}};
}

inline csv::Table run_padic_eig(const RunConfig& c) {
  const auto P = Polynomial::parse(flag(c, "poly"));
  const int j = static_cast<int>(parse_int(flag(c, "j")));
  csv::Table t{{"p", "j", "xi", "re", "im", "abs", "bound"}, {}};
  if (has(c, "p-max")) {
    // one row per prime: the largest nonzero-frequency eigenvalue
    const auto lo = parse_int(flag(c, "p-min")), hi = parse_int(flag(c, "p-max"));
    require(lo >= 2 && lo <= hi, "need 2 <= --p-min <= --p-max");
    std::vector<std::int64_t> primes;
    for (std::int64_t p = lo; p <= hi; ++p)
      if (is_prime(static_cast<std::uint64_t>(p))) primes.push_back(p);
    auto rows = map_chunks(primes.size(), 1, [&](std::size_t b, std::size_t) {
      const auto p = primes[b];
      const auto ev = char_eigenvalues(p, j, P);
      std::size_t arg = ev.size() > 1 ? 1 : 0;
      for (std::size_t xi = 1; xi < ev.size(); ++xi)
        if (std::abs(ev[xi]) > std::abs(ev[arg])) arg = xi;
      return std::vector<csv::Cell>{integer(p), integer(j), integer(static_cast<std::int64_t>(arg)),
                                    num(ev[arg].real()), num(ev[arg].imag()), num(std::abs(ev[arg])),
                                    num(eigenvalue_bound(p, j, P, static_cast<std::int64_t>(arg)))};
    });
    t.rows = std::move(rows);
    return t;
  }
  const auto p = parse_int(flag(c, "p"));
  const auto ev = char_eigenvalues(p, j, P);
  for (std::size_t xi = 0; xi < ev.size(); ++xi)
    t.rows.push_back({integer(p), integer(j), integer(static_cast<std::int64_t>(xi)), num(ev[xi].real()),
                      num(ev[xi].imag()), num(std::abs(ev[xi])),
                      num(eigenvalue_bound(p, j, P, static_cast<std::int64_t>(xi)))});
  return t;
}

inline csv::Table run_padic_count(const RunConfig& c) {
  const auto P = Polynomial::parse(flag(c, "poly"));
  const auto p = parse_int(flag(c, "p"));
  const int j = static_cast<int>(parse_int(flag(c, "j")));
  const double s = parse_real(flag(c, "s"));
  const auto h = fiber_counts(p, j, P);
  const auto total = std::accumulate(h.begin(), h.end(), std::int64_t{0});
  csv::Table t{{"p", "j", "norm", "total"}, {{integer(p), integer(j), num(fiber_count_norm(p, j, P, s)), integer(total)}}};
  const auto trials = parse_int(flag(c, "mc-trials"));
  if (trials > 0) {
    const auto mc = norm_lower_bound(p, j, P, s, static_cast<int>(trials), c.seed);
    t.columns.push_back("mc_lower_bound");
    t.rows[0].push_back(num(mc.best_ratio));
  }
  return t;
}

inline csv::Table run_rotation(const RunConfig& c) {
  const RotationSystem sys{parse_real(flag(c, "alpha"))};
  const auto v = rotation_average(sys, WeightFunction::parse(flag(c, "weight")),
                                  PolynomialFamily::parse(flag(c, "family")), funcs_from_spec(flag(c, "funcs")),
                                  parse_real(flag(c, "N")), parse_real(flag(c, "x")));
  return {{"re", "im", "abs"}, {{num(v.real()), num(v.imag()), num(std::abs(v))}}};
}

inline csv::Table run_converge(const RunConfig& c, std::ostream& err) {
  const RotationSystem sys{parse_real(flag(c, "alpha"))};
  const auto scales = LacunarySet::geometric(parse_real(flag(c, "first")), parse_real(flag(c, "lambda")),
                                             static_cast<std::size_t>(parse_int(flag(c, "count"))));
  const auto rep = convergence_series(sys, WeightFunction::parse(flag(c, "weight")),
                                      PolynomialFamily::parse(flag(c, "family")), funcs_from_spec(flag(c, "funcs")),
                                      scales, parse_real(flag(c, "x")));
  if (rep.limit_unreliable)
    err << "warning: alpha is close to a rational with denominator <= 1000; the limit column is not valid\n";
  csv::Table t{{"N", "re", "im", "deviation", "v2_so_far"}, {}};
  for (const auto& r : rep.rows)
    t.rows.push_back({num(r.N), num(r.value.real()), num(r.value.imag()), num(r.deviation), num(r.v2_so_far)});
  return t;
}

inline csv::Table run_farey(const RunConfig& c) {
  const auto f = farey_set(static_cast<int>(parse_int(flag(c, "level"))));
  csv::Table t{{"b", "q", "value"}, {}};
  for (const auto& r : f.members) t.rows.push_back({integer(r.b), integer(r.q), num(r.value())});
  return t;
}

inline csv::Table run_project(const RunConfig& c) {
  const auto Q = parse_int(flag(c, "Q"));
  require(Q >= 1 && Q <= kMaxOutputWindow, "--Q must lie in [1, 2^26]");
  const auto f = cyclic_from_spec(flag(c, "signal"), Q, c.seed);
  const auto g = projection_pi(f, static_cast<int>(parse_int(flag(c, "level"))), static_cast<int>(parse_int(flag(c, "k"))));
  csv::Table t{{"x", "re", "im"}, {}};
  for (std::int64_t x = 0; x < Q; ++x) t.rows.push_back({integer(x), num(g[x].real()), num(g[x].imag())});
  return t;
}

inline csv::Table run_iwconst(const RunConfig& c) {
  return {{"value"}, {{num(iw_constant(parse_real(flag(c, "C")), parse_real(flag(c, "N"))))}}};
}

}  // namespace detail

namespace detail {

template <class F>
auto quiet(F f) {
  return [f](const RunConfig& c, std::ostream&) { return f(c); };
}

}  // namespace detail

inline const std::vector<Subcommand>& subcommands() {
  using namespace detail;
  static const std::vector<Subcommand> table = {
      {"weights", "mean, residue-class mean and moment of a weight on [1, N]",
       {{"weight", "weight spec (unit, mangoldt, cramer:W, hb:W, hbt:W:eps[:c], lambdaN[:C0], diff(A,B))", ""},
        {"N", "range [1, N]", ""},
        {"modulus", "residue modulus q", ""},
        {"residue", "residue b (with --modulus)", ""},
        {"moment", "moment order k", ""},
        {"scale", "scale for scale-linked weights (default N)", ""}},
       quiet(run_weights)},
      {"unorm", "little Gowers norm u^{s+1}[N] of a weight or a weight difference",
       {{"weight", "weight spec", ""},
        {"minus", "subtract this weight (default: unit)", ""},
        {"N", "interval [1, N]", ""},
        {"degree", "phase degree s", "1"},
        {"steps", "grid steps delta_0,...,delta_s", ""},
        {"oversample", "FFT oversampling (>= 8)", "64"}},
       quiet(run_unorm)},
      {"expsum", "discrete symbol m_{N,w}(xi)",
       {{"weight", "weight spec", "unit"},
        {"family", "polynomials, e.g. n,n^2", ""},
        {"N", "scale", ""},
        {"xi", "frequency vector", ""},
        {"points", "sweep coordinate 1 over this many points of [0,1)", "0"}},
       quiet(run_expsum)},
      {"symbol", "continuous symbol over [1/2, 1]",
       {{"family", "polynomials", ""},
        {"N", "scale", ""},
        {"zeta", "frequency vector", ""},
        {"rel-tol", "relative tolerance", "1e-12"},
        {"points", "sweep coordinate 1 over this many points of [0,1)", "0"}},
       quiet(run_symbol)},
      {"arcscan", "major-arc approximation error on a grid around theta",
       {{"weight", "weight spec", "lambdaN"},
        {"family", "polynomials", ""},
        {"N", "scale", ""},
        {"theta", "rational centre, e.g. 1/3,1/3", ""},
        {"radii", "per-coordinate radii", ""},
        {"radius-scale", "radii c / N^{d_i} when --radii is absent", "1"},
        {"grid", "points per coordinate", "5"}},
       quiet(run_arcscan)},
      {"gauss", "unit-group Gauss sum",
       {{"family", "polynomials", ""}, {"a", "numerators", ""}, {"q", "denominator", ""}},
       quiet(run_gauss)},
      {"average", "multilinear average of finitely supported signals",
       {{"weight", "weight spec", "unit"},
        {"family", "polynomials", ""},
        {"N", "scale", ""},
        {"signals", "';'-separated: delta:x, ones:lo:hi, random:lo:hi or a CSV path", ""},
        {"truncated", "sum over (N/2, N] instead of [1, N]", "1"}},
       [](const RunConfig& c, std::ostream&) { return run_average(c, false); }},
      {"dual", "j-th dual average",
       {{"weight", "weight spec", "unit"},
        {"family", "polynomials", ""},
        {"N", "scale", ""},
        {"signals", "signal specs", ""},
        {"truncated", "sum over (N/2, N]", "1"},
        {"j", "slot (1-based)", ""}},
       [](const RunConfig& c, std::ostream&) { return run_average(c, true); }},
      {"variation", "r-variation seminorm and norm of a real sequence",
       {{"sequence", "comma-separated values", ""},
        {"random-length", "seeded uniform [-1,1] sequence of this length", "16"},
        {"exponents", "list of r (inf allowed)", "1,2,4,inf"}},
       quiet(run_variation)},
      {"rmcheck", "multilinear Rademacher-Menshov harness on Z/QZ",
       {{"family", "polynomials", "n,n^2"},
        {"K", "number of increments", "5"},
        {"q", "outer exponent", "2"},
        {"Q", "modulus", "64"},
        {"N0", "scale of the truncated average", "8"}},
       quiet(run_rmcheck)},
      {"padic-eig", "character eigenvalues of the unit average on Z/p^jZ",
       {{"poly", "polynomial", "n^2"},
        {"p", "prime", ""},
        {"j", "exponent", "1"},
        {"p-min", "range mode: smallest prime", "2"},
        {"p-max", "range mode: largest prime (one row per prime)", ""}},
       quiet(run_padic_eig)},
      {"padic-count", "fiber-count norm on Z/p^jZ",
       {{"poly", "polynomial", "n^2"},
        {"p", "prime", ""},
        {"j", "exponent", "1"},
        {"s", "exponent s > 1", "1.5"},
        {"mc-trials", "seeded trials for the L^2 -> L^{2s} lower bound", "0"}},
       quiet(run_padic_count)},
      {"rotation", "weighted multiple average along a circle rotation",
       {{"alpha", "rotation angle, e.g. sqrt(2)", ""},
        {"weight", "weight spec", "unit"},
        {"family", "polynomials", ""},
        {"funcs", "';'-separated trig polynomials m:re[:im]+...", ""},
        {"N", "scale", ""},
        {"x", "starting point", "0"}},
       quiet(run_rotation)},
      {"converge", "rotation averages along lacunary scales",
       {{"alpha", "rotation angle", ""},
        {"weight", "weight spec", "lambdaN"},
        {"family", "polynomials", ""},
        {"funcs", "trig polynomials", ""},
        {"first", "first scale", "2^10"},
        {"lambda", "scale ratio (>= 1.5)", "2"},
        {"count", "number of scales", "11"},
        {"x", "starting point", "0"}},
       run_converge},
      {"farey", "reduced fractions b/q with q <= 2^level", {{"level", "level l", ""}}, quiet(run_farey)},
      {"project", "Ionescu-Wainger projection on Z/QZ",
       {{"Q", "modulus (power of two)", "256"},
        {"level", "Farey level l", ""},
        {"k", "arc scale exponent", ""},
        {"signal", "tone:t, delta:x, ones, random or a CSV path", ""}},
       quiet(run_project)},
      {"iwconst", "C log N log log log N / log log N", {{"C", "constant", ""}, {"N", "scale >= 100", ""}}, quiet(run_iwconst)},
  };
  return table;
}

// ---------------------------------------------------------------------------
// output

inline nlohmann::json to_json(const std::string& sub, const csv::Table& t) {
  nlohmann::json j;
  j["subcommand"] = sub;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows) {
    auto row = nlohmann::json::array();
    for (const auto& c : r) {
      if (auto d = std::get_if<double>(&c))
        row.push_back(std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr));
      else if (auto i = std::get_if<long long>(&c))
        row.push_back(*i);
      else
        row.push_back(std::get<std::string>(c));
    }
    j["rows"].push_back(std::move(row));
  }
  return j;
}

/// Polyline of the "abs" column (else the last column) against the first.
inline std::string to_svg(const csv::Table& t) {
  std::size_t yc = t.columns.size() - 1;
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == "abs") yc = i;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : t.rows) {
    try {
      pts.emplace_back(csv::as_double(r[0]), csv::as_double(r[yc]));
    } catch (const invalid_input&) {
    }
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (auto [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n<polyline fill=\"none\" "
                  "stroke=\"black\" points=\"";
  char buf[64];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", 20.0 + 600.0 * (pts[i].first - x0) / (x1 - x0),
                  380.0 - 360.0 * (pts[i].second - y0) / (y1 - y0));
    s += buf;
  }
  s += "\"/>\n<text x=\"20\" y=\"15\">" + t.columns[yc] + " vs " + t.columns[0] + "</text>\n</svg>\n";
  return s;
}

inline void emit(const RunConfig& c, const csv::Table& t, std::ostream& out) {
  std::string text = c.format == "json" ? to_json(c.subcommand, t).dump(1) + "\n" : csv::to_string(t);
  if (c.output.empty()) {
    out << text;
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw invalid_input("cannot write '" + c.output + "'");
    f << text;
  }
  if (!c.svg.empty()) {
    std::ofstream f(c.svg, std::ios::binary);
    if (!f) throw invalid_input("cannot write '" + c.svg + "'");
    f << to_svg(t);
  }
}

/// Runs a parsed configuration. Exit codes as documented at the top.
inline int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    require(c.format == "csv" || c.format == "json", "--format must be csv or json");
    const auto& subs = subcommands();
    auto it = std::find_if(subs.begin(), subs.end(), [&](const Subcommand& s) { return s.name == c.subcommand; });
    if (it == subs.end()) throw invalid_input("unknown subcommand '" + c.subcommand + "'");
    const csv::Table t = c.from_csv.empty() ? it->run(c, err) : csv::read_file(c.from_csv);
    emit(c, t, out);
    return 0;
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const numeric_failure& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

/// Reads key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open config '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw invalid_input("config line " + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

/// Full command-line entry point: argv without the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ergodic_lab: numerical experiments on weighted polynomial multiple ergodic averages"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string threads_flag, config_path;
  std::int64_t seed = 1;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  const auto& subs = subcommands();
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    for (const auto& f : s.flags) options[s.name][f.name] = sc->add_option("--" + f.name, values[s.name][f.name], f.help);
    sc->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sc->add_option("--output", cfg.output, "write the table here instead of stdout");
    sc->add_option("--seed", seed, "seed for randomized inputs");
    sc->add_option("--threads", threads_flag, "worker threads (default: $ERGODIC_LAB_THREADS or all cores)");
    sc->add_option("--config", config_path, "file of key=value flag defaults");
    sc->add_option("--from-csv", cfg.from_csv, "replay a previously emitted table");
    sc->add_option("--svg", cfg.svg, "also write a polyline chart");
  }

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
      std::none_of(subs.begin(), subs.end(), [&](const Subcommand& s) { return s.name == args[0]; })) {
    err << "error: unknown subcommand '" << args[0] << "'\n\n" << app.help();
    return 1;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  const auto* chosen = app.get_subcommands().front();
  cfg.subcommand = chosen->get_name();
  try {
    if (!config_path.empty()) {
      for (const auto& [k, v] : read_config_file(config_path)) {
        auto oi = options[cfg.subcommand].find(k);
        if (oi == options[cfg.subcommand].end())
          throw invalid_input("config key '" + k + "' is not a flag of '" + cfg.subcommand + "'");
        if (oi->second->count() == 0) values[cfg.subcommand][k] = v;
      }
    }
    const Subcommand& sub = *std::find_if(subs.begin(), subs.end(), [&](const Subcommand& s) { return s.name == cfg.subcommand; });
    for (const auto& f : sub.flags) {
      auto& v = values[cfg.subcommand][f.name];
      if (v.empty()) v = f.fallback;
    }
    cfg.flags = values[cfg.subcommand];
    cfg.seed = static_cast<std::uint64_t>(seed);

    int n_threads = 0;
    if (!threads_flag.empty()) {
      n_threads = static_cast<int>(parse_int(threads_flag));
    } else if (const char* env = std::getenv("ERGODIC_LAB_THREADS"); env && *env) {
      n_threads = static_cast<int>(parse_int(env));
    } else {
      n_threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    }
    require(n_threads >= 1 && n_threads <= 1024, "--threads must lie in [1, 1024]");
    set_threads(n_threads);
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return dispatch(cfg, out, err);
}

}  // namespace elab::cli
