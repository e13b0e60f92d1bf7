#pragma once

// Integer-coefficient polynomials and distinct-degree polynomial families.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ergodic_lab/core.hpp"

namespace elab {

/// coefficients[j] multiplies n^j. Trailing zeros are stripped.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<std::int64_t> coefficients) : c_(std::move(coefficients)) {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  /// The monomial n^d.
  static Polynomial monomial(int d) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(d) + 1, 0);
    c.back() = 1;
    return Polynomial(std::move(c));
  }

  /// Parses expressions like "n^2", "3n^3-2n+1", "-n".
  static Polynomial parse(const std::string& text);

  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  const std::vector<std::int64_t>& coefficients() const { return c_; }

  /// Exact evaluation; throws invalid_input if the value leaves int64.
  std::int64_t operator()(std::int64_t n) const {
    i128 acc = 0;
    for (std::size_t j = c_.size(); j-- > 0;) {
      acc = acc * n;
      if (acc > INT64_MAX || acc < INT64_MIN) throw overflow(n);
      acc += c_[j];
      if (acc > INT64_MAX || acc < INT64_MIN) throw overflow(n);
    }
    return static_cast<std::int64_t>(acc);
  }

  /// P(n) mod m in [0, m), no overflow for any 64-bit n.
  std::int64_t mod(std::int64_t n, std::int64_t m) const {
    const i128 nm = mod_floor(n, m);
    i128 acc = 0;
    for (std::size_t j = c_.size(); j-- > 0;) {
      acc = (acc * nm + mod_floor(c_[j], m)) % m;
    }
    return static_cast<std::int64_t>(acc);
  }

  /// Real evaluation for continuous symbols.
  double real(double x) const {
    double acc = 0.0;
    for (std::size_t j = c_.size(); j-- > 0;) acc = acc * x + static_cast<double>(c_[j]);
    return acc;
  }

  std::string to_string() const;

 private:
  invalid_input overflow(std::int64_t n) const {
    return invalid_input("polynomial " + to_string() + " overflows 64 bits at n=" + std::to_string(n));
  }
  std::vector<std::int64_t> c_;
};

inline std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t j = c_.size(); j-- > 0;) {
    const std::int64_t a = c_[j];
    if (a == 0) continue;
    const std::int64_t mag = a < 0 ? -a : a;
    if (!out.empty())
      out += a < 0 ? "-" : "+";
    else if (a < 0)
      out += "-";
    if (mag != 1 || j == 0) out += std::to_string(mag);
    if (j >= 1) out += "n";
    if (j >= 2) out += "^" + std::to_string(j);
  }
  return out;
}

inline Polynomial Polynomial::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '*') s += ch;
  require(!s.empty(), "empty polynomial");
  std::vector<std::int64_t> c;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::int64_t coef = 1;
    bool has_digits = false;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::size_t used = 0;
      coef = std::stoll(s.substr(i), &used);
      i += used;
      has_digits = true;
    }
    int power = 0;
    if (i < s.size() && (s[i] == 'n' || s[i] == 'x')) {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t used = 0;
        require(i < s.size(), "polynomial '" + text + "': missing exponent");
        power = std::stoi(s.substr(i), &used);
        i += used;
      }
    } else {
      require(has_digits, "polynomial '" + text + "': cannot parse term at position " + std::to_string(i));
    }
    require(power >= 0 && power <= 16, "polynomial '" + text + "': exponent out of range");
    if (c.size() <= static_cast<std::size_t>(power)) c.resize(static_cast<std::size_t>(power) + 1, 0);
    c[static_cast<std::size_t>(power)] += sign * coef;
    require(i == s.size() || s[i] == '+' || s[i] == '-', "polynomial '" + text + "': unexpected character");
  }
  return Polynomial(std::move(c));
}

/// P_1, ..., P_k with 1 <= deg P_1 < ... < deg P_k.
class PolynomialFamily {
 public:
  explicit PolynomialFamily(std::vector<Polynomial> polys) : p_(std::move(polys)) {
    require(!p_.empty(), "polynomial family must be non-empty");
    require(p_.front().degree() >= 1, "polynomial family: deg P_1 must be >= 1");
    for (std::size_t i = 1; i < p_.size(); ++i)
      require(p_[i].degree() > p_[i - 1].degree(), "polynomial family: degrees must be strictly increasing");
  }

  /// (n, n^2, ..., n^k)
  static PolynomialFamily monomials(int k) {
    std::vector<Polynomial> v;
    for (int d = 1; d <= k; ++d) v.push_back(Polynomial::monomial(d));
    return PolynomialFamily(std::move(v));
  }

  /// Comma-separated list: "n,n^2".
  static PolynomialFamily parse(const std::string& text) {
    std::vector<Polynomial> v;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string::npos) end = text.size();
      v.push_back(Polynomial::parse(text.substr(start, end - start)));
      start = end + 1;
    }
    return PolynomialFamily(std::move(v));
  }

  std::size_t size() const { return p_.size(); }
  const Polynomial& operator[](std::size_t i) const { return p_[i]; }
  int degree(std::size_t i) const { return p_[i].degree(); }
  auto begin() const { return p_.begin(); }
  auto end() const { return p_.end(); }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < p_.size(); ++i) s += (i ? "," : "") + p_[i].to_string();
    return s;
  }

 private:
  std::vector<Polynomial> p_;
};

}  // namespace elab
