#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pairlab/matrix.hpp"
#include "pairlab/pair.hpp"

namespace pairlab {

/// Raised on malformed matrix or polynomial files.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Matrix text format: header line `rows cols p`, then `rows` lines of
/// `cols` space-separated integers in [0, p). Round trips bit-exactly.
inline Mat read_matrix(std::istream& in, const std::string& what = "<stream>") {
  long long rows, cols, p;
  if (!(in >> rows >> cols >> p))
    throw ParseError(what + ": malformed header, want `rows cols p`");
  if (rows < 0 || cols < 0)
    throw ParseError(what + ": negative dimensions");
  if (p < 2 || p >= (1ll << 31) || !is_prime(static_cast<std::uint32_t>(p)))
    throw ParseError(what + ": modulus " + std::to_string(p) + " is not prime");
  Fp f(static_cast<std::uint32_t>(p));
  Mat m(static_cast<std::uint32_t>(rows), static_cast<std::uint32_t>(cols), f);
  for (std::uint32_t i = 0; i < m.rows(); ++i)
    for (std::uint32_t j = 0; j < m.cols(); ++j) {
      long long v;
      if (!(in >> v))
        throw ParseError(what + ": missing entry at row " + std::to_string(i));
      if (v < 0 || v >= p)
        throw ParseError(what + ": entry " + std::to_string(v) + " at (" +
                         std::to_string(i) + "," + std::to_string(j) +
                         ") out of range [0," + std::to_string(p) + ")");
      m.set_raw(i, j, static_cast<std::uint32_t>(v));
    }
  return m;
}

inline void write_matrix(std::ostream& out, const Mat& m) {
  out << m.rows() << ' ' << m.cols() << ' ' << m.modulus() << '\n' << m;
}

inline Mat read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return read_matrix(in, path);
}

inline void write_matrix_file(const Mat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  write_matrix(out, m);
}

/// Polynomial text format: one `coeff i j` triple per line for the monomial
/// coeff * x^i y^j. Blank lines and `#` comments are allowed.
inline BivarPoly read_poly(std::istream& in, const Fp& field,
                           const std::string& what = "<stream>") {
  BivarPoly poly(field);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string::size_type hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long c, i, j;
    if (!(ls >> c)) continue;  // blank
    if (!(ls >> i >> j) || i < 0 || j < 0)
      throw ParseError(what + ":" + std::to_string(lineno) +
                       ": want `coeff i j` with i, j >= 0");
    if (c < 0 || c >= field.modulus())
      throw ParseError(what + ":" + std::to_string(lineno) + ": coefficient " +
                       std::to_string(c) + " out of range [0," +
                       std::to_string(field.modulus()) + ")");
    Fe prev = poly.coeff(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    poly.set_coeff(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                   prev + field(c));
  }
  return poly;
}

inline BivarPoly read_poly_file(const std::string& path, const Fp& field) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return read_poly(in, field, path);
}

inline void write_poly(std::ostream& out, const BivarPoly& poly) {
  for (const auto& [ij, c] : poly.terms())
    out << c << ' ' << ij.first << ' ' << ij.second << '\n';
}

}  // namespace pairlab
