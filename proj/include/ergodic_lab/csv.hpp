#pragma once

// Minimal CSV tables. Numbers are written in scientific notation with 17
// significant digits, which round-trips every double exactly.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ergodic_lab/core.hpp"

namespace elab::csv {

using Cell = std::variant<double, long long, std::string>;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

/// Classifies a field the way format_cell would have produced it.
inline Cell parse_cell(const std::string& s) {
  if (s.empty()) return s;
  char* end = nullptr;
  if (s.find_first_of(".eEn") == std::string::npos || s == "nan") {
    if (s != "nan") {
      errno = 0;
      long long v = std::strtoll(s.c_str(), &end, 10);
      if (end == s.c_str() + s.size() && errno == 0) return v;
    }
  }
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() + s.size()) return v;
  return s;
}

inline double as_double(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return *d;
  if (auto i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  const auto& s = std::get<std::string>(c);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw invalid_input("csv: not a number: '" + s + "'");
  return v;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw invalid_input("csv: missing column '" + name + "'");
  }
};

inline void write(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

inline std::string to_string(const Table& t) {
  std::ostringstream s;
  write(s, t);
  return s.str();
}

inline Table read(std::istream& in) {
  Table t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      auto end = l.find(',', start);
      f.push_back(l.substr(start, end == std::string::npos ? std::string::npos : end - start));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return f;
  };
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split(line);
    if (header) {
      t.columns = f;
      header = false;
      continue;
    }
    if (f.size() != t.columns.size())
      throw invalid_input("csv: row has " + std::to_string(f.size()) + " fields, header has " +
                          std::to_string(t.columns.size()));
    std::vector<Cell> row;
    for (auto& s : f) row.push_back(parse_cell(s));
    t.rows.push_back(std::move(row));
  }
  if (header) throw invalid_input("csv: empty input");
  return t;
}

inline Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open '" + path + "'");
  return read(in);
}

}  // namespace elab::csv
