#pragma once

// Plain-text interchange formats.
//
//   matrix     "m n" then m rows of n integers (the 4ti2 convention)
//   partition  one block per line, 1-based run indices
//   edge list  one "tail head" pair per line, 1-based vertices
//   square     I lines of I symbols (any tokens; equal tokens = same symbol)
//   vector     whitespace-separated rationals: "3", "-1/2", "0.25", "1e-3"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "circuitrand/circuits.hpp"
#include "circuitrand/design_catalog.hpp"
#include "circuitrand/error.hpp"
#include "circuitrand/exact_linalg.hpp"
#include "circuitrand/randomisation.hpp"
#include "circuitrand/unimodular.hpp"

namespace circuitrand::io {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::vector<std::vector<std::string>> tokenised_lines(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  return lines;
}

inline Integer parse_integer(const std::string& tok) {
  std::size_t start = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (start == tok.size() || tok.find_first_not_of("0123456789", start) != std::string::npos)
    throw Error(ErrorCode::Parse, "not an integer: '" + tok + "'");
  // cpp_int reads a leading zero as an octal prefix, so strip them.
  const std::size_t first = std::min(tok.find_first_not_of('0', start), tok.size() - 1);
  const Integer magnitude(tok.substr(first));
  return tok[0] == '-' ? Integer(-magnitude) : magnitude;
}

inline std::size_t parse_index(const std::string& tok) {
  const Integer v = parse_integer(tok);
  if (v < 1 || v > Integer(1'000'000'000)) throw Error(ErrorCode::Parse, "index out of range: " + tok);
  return static_cast<std::size_t>(v) - 1;
}

}  // namespace detail

/// Exact value of a decimal or fraction literal.
inline Rational parse_rational(const std::string& tok) {
  if (tok.empty()) throw Error(ErrorCode::Parse, "empty number");
  if (auto slash = tok.find('/'); slash != std::string::npos) {
    const Integer num = detail::parse_integer(tok.substr(0, slash));
    const Integer den = detail::parse_integer(tok.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::Parse, "zero denominator: " + tok);
    return Rational(num, den);
  }
  std::string mant = tok;
  long long exp10 = 0;
  if (auto e = tok.find_first_of("eE"); e != std::string::npos) {
    mant = tok.substr(0, e);
    const Integer ev = detail::parse_integer(tok.substr(e + 1));
    if (abs(ev) > 4096) throw Error(ErrorCode::Parse, "exponent out of range: " + tok);
    exp10 = static_cast<long long>(ev);
  }
  if (mant.empty()) throw Error(ErrorCode::Parse, "not a number: " + tok);
  bool negative = false;
  if (mant[0] == '-' || mant[0] == '+') {
    negative = mant[0] == '-';
    mant = mant.substr(1);
  }
  std::string digits;
  if (auto dot = mant.find('.'); dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long long>(mant.size() - dot - 1);
  } else {
    digits = mant;
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::Parse, "not a number: '" + tok + "'");
  Rational v{detail::parse_integer(digits)};
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
  v = exp10 < 0 ? v / Rational(scale) : v * Rational(scale);
  return negative ? Rational(-v) : v;
}

inline std::string format_rational(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline std::string format_vector(const RationalVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_rational(v[i]);
  return out + ")";
}

inline std::string format_vector(const IntVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].str();
  return out + ")";
}

inline IntMatrix parse_matrix(std::string_view text) {
  const auto lines = detail::tokenised_lines(text);
  std::vector<std::string> toks;
  for (const auto& l : lines) toks.insert(toks.end(), l.begin(), l.end());
  if (toks.size() < 2) throw Error(ErrorCode::Parse, "matrix header 'rows cols' missing");
  const Integer m = detail::parse_integer(toks[0]), n = detail::parse_integer(toks[1]);
  if (m < 0 || n < 0 || m * n > Integer(100'000'000))
    throw Error(ErrorCode::Parse, "bad matrix dimensions");
  const auto rows = static_cast<std::size_t>(m), cols = static_cast<std::size_t>(n);
  if (toks.size() != 2 + rows * cols) {
    throw Error(ErrorCode::Parse, "expected " + std::to_string(rows * cols) + " entries, found " +
                                      std::to_string(toks.size() - 2));
  }
  IntMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) a(i / cols, i % cols) = detail::parse_integer(toks[2 + i]);
  return a;
}

inline void write_matrix(std::ostream& out, const IntMatrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
    out << '\n';
  }
}

inline std::string matrix_to_string(const IntMatrix& a) {
  std::ostringstream ss;
  write_matrix(ss, a);
  return ss.str();
}

/// Rows are the circuit vectors, in the given order.
inline IntMatrix circuits_matrix(const std::vector<Circuit>& cs, std::size_t n) {
  IntMatrix a(cs.size(), n);
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cs[i].vector[j];
  return a;
}

inline RandomisationSystem parse_partition(std::string_view text, std::size_t n_runs) {
  std::vector<IndexSet> blocks;
  for (const auto& line : detail::tokenised_lines(text)) {
    IndexSet b;
    for (const auto& t : line) b.push_back(detail::parse_index(t));
    blocks.push_back(std::move(b));
  }
  try {
    return RandomisationSystem(n_runs, std::move(blocks));
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline std::string format_block(const IndexSet& b) {
  std::string out = "{";
  for (std::size_t i = 0; i < b.size(); ++i) out += (i ? "," : "") + std::to_string(b[i] + 1);
  return out + "}";
}

inline std::string format_system(const RandomisationSystem& r) {
  std::string out;
  for (std::size_t h = 0; h < r.blocks().size(); ++h) out += (h ? " " : "") + format_block(r.blocks()[h]);
  return out;
}

/// Partition file text: one line per block.
inline std::string partition_to_string(const RandomisationSystem& r) {
  std::string out;
  for (const auto& b : r.blocks()) {
    for (std::size_t i = 0; i < b.size(); ++i) out += (i ? " " : "") + std::to_string(b[i] + 1);
    out += '\n';
  }
  return out;
}

/// Vertex count is the largest endpoint unless given.
inline DirectedGraph parse_edge_list(std::string_view text, std::size_t n_vertices = 0) {
  std::vector<DirectedGraph::Edge> edges;
  std::size_t max_v = 0;
  for (const auto& line : detail::tokenised_lines(text)) {
    if (line.size() != 2) throw Error(ErrorCode::Parse, "edge lines need exactly 'tail head'");
    const auto t = detail::parse_index(line[0]), h = detail::parse_index(line[1]);
    max_v = std::max({max_v, t + 1, h + 1});
    edges.emplace_back(t, h);
  }
  try {
    return DirectedGraph(n_vertices ? n_vertices : max_v, std::move(edges));
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline LatinSquare parse_latin_square(std::string_view text) {
  const auto lines = detail::tokenised_lines(text);
  std::map<std::string, std::size_t> symbols;
  std::vector<std::size_t> cells;
  for (const auto& line : lines) {
    if (line.size() != lines.size()) throw Error(ErrorCode::Parse, "Latin square grid is not square");
    for (const auto& t : line) {
      auto [it, inserted] = symbols.emplace(t, symbols.size());
      cells.push_back(it->second);
    }
  }
  try {
    return LatinSquare(lines.size(), std::move(cells));
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline RationalVector parse_rational_vector(std::string_view text) {
  RationalVector out;
  for (const auto& line : detail::tokenised_lines(text))
    for (const auto& t : line) out.push_back(parse_rational(t));
  return out;
}

}  // namespace circuitrand::io
