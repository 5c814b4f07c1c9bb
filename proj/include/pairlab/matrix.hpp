#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairlab/field.hpp"

namespace pairlab {

/// Dense matrix over GF(p) with exact entries, row-major storage.
/// Matrices are values: every operation returns a fresh matrix and never
/// mutates its inputs, so concurrent reads are safe.
class Mat {
 public:
  Mat(std::uint32_t rows, std::uint32_t cols, const Fp& field)
      : rows_(rows), cols_(cols), field_(field), a_(std::size_t{rows} * cols, 0) {}

  static Mat identity(std::uint32_t n, const Fp& field) {
    Mat m(n, n, field);
    for (std::uint32_t i = 0; i < n; ++i) m.set_raw(i, i, 1 % field.modulus());
    return m;
  }

  /// Build from integer literals (negatives allowed, reduced mod p).
  static Mat from_rows(std::initializer_list<std::initializer_list<std::int64_t>> rows,
                       const Fp& field) {
    std::uint32_t r = static_cast<std::uint32_t>(rows.size());
    std::uint32_t c = r == 0 ? 0 : static_cast<std::uint32_t>(rows.begin()->size());
    Mat m(r, c, field);
    std::uint32_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw std::invalid_argument("Mat::from_rows: ragged rows");
      std::uint32_t j = 0;
      for (std::int64_t v : row) m.set_raw(i, j++, field.canon(v));
      ++i;
    }
    return m;
  }

  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  const Fp& field() const noexcept { return field_; }
  std::uint32_t modulus() const noexcept { return field_.modulus(); }

  std::uint32_t raw(std::uint32_t i, std::uint32_t j) const {
    return a_[std::size_t{i} * cols_ + j];
  }
  void set_raw(std::uint32_t i, std::uint32_t j, std::uint32_t v) {
    a_[std::size_t{i} * cols_ + j] = v;
  }

  Fe at(std::uint32_t i, std::uint32_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("Mat::at");
    return Fe(raw(i, j), modulus());
  }
  void set(std::uint32_t i, std::uint32_t j, Fe v) {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("Mat::set");
    if (v.modulus != modulus()) throw std::invalid_argument("Mat::set: modulus mismatch");
    set_raw(i, j, v.value);
  }
  void set(std::uint32_t i, std::uint32_t j, std::int64_t v) {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("Mat::set");
    set_raw(i, j, field_.canon(v));
  }

  bool is_zero() const noexcept {
    for (std::uint32_t v : a_)
      if (v != 0) return false;
    return true;
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ &&
           x.modulus() == y.modulus() && x.a_ == y.a_;
  }
  friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

  friend Mat operator+(const Mat& x, const Mat& y) {
    x.check_same_shape(y, "operator+");
    Mat r(x.rows_, x.cols_, x.field_);
    for (std::size_t k = 0; k < x.a_.size(); ++k)
      r.a_[k] = x.field_.add(x.a_[k], y.a_[k]);
    return r;
  }
  friend Mat operator-(const Mat& x, const Mat& y) {
    x.check_same_shape(y, "operator-");
    Mat r(x.rows_, x.cols_, x.field_);
    for (std::size_t k = 0; k < x.a_.size(); ++k)
      r.a_[k] = x.field_.sub(x.a_[k], y.a_[k]);
    return r;
  }
  Mat operator-() const {
    Mat r(rows_, cols_, field_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = field_.neg(a_[k]);
    return r;
  }

  friend Mat operator*(const Mat& x, const Mat& y) {
    if (x.modulus() != y.modulus())
      throw std::invalid_argument("Mat::operator*: modulus mismatch");
    if (x.cols_ != y.rows_)
      throw std::invalid_argument("Mat::operator*: dimension mismatch (" +
                                  x.shape_str() + " * " + y.shape_str() + ")");
    const Fp& f = x.field_;
    Mat r(x.rows_, y.cols_, f);
    const std::uint32_t p = f.modulus();
    if (p < (1u << 16)) {
      // products fit in 32 bits; sum up to 2^32 terms without overflow
      for (std::uint32_t i = 0; i < x.rows_; ++i) {
        for (std::uint32_t k = 0; k < x.cols_; ++k) {
          std::uint64_t xv = x.raw(i, k);
          if (xv == 0) continue;
          const std::uint32_t* yrow = &y.a_[std::size_t{k} * y.cols_];
          std::uint32_t* rrow = &r.a_[std::size_t{i} * r.cols_];
          for (std::uint32_t j = 0; j < y.cols_; ++j) {
            rrow[j] = f.reduce(rrow[j] + xv * yrow[j]);
          }
        }
      }
    } else {
      for (std::uint32_t i = 0; i < x.rows_; ++i)
        for (std::uint32_t j = 0; j < y.cols_; ++j) {
          std::uint64_t acc = 0;
          for (std::uint32_t k = 0; k < x.cols_; ++k)
            acc = f.reduce(acc + std::uint64_t{x.raw(i, k)} * y.raw(k, j));
          r.set_raw(i, j, static_cast<std::uint32_t>(acc));
        }
    }
    return r;
  }

  Mat scaled(Fe c) const {
    if (c.modulus != modulus()) throw std::invalid_argument("Mat::scaled: modulus mismatch");
    Mat r(rows_, cols_, field_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = field_.mul(c.value, a_[k]);
    return r;
  }

  Mat transposed() const {
    Mat r(cols_, rows_, field_);
    for (std::uint32_t i = 0; i < rows_; ++i)
      for (std::uint32_t j = 0; j < cols_; ++j) r.set_raw(j, i, raw(i, j));
    return r;
  }

  Mat pow(std::uint32_t e) const {
    if (!is_square()) throw std::invalid_argument("Mat::pow: not square");
    Mat acc = identity(rows_, field_);
    Mat base = *this;
    while (e != 0) {
      if (e & 1) acc = acc * base;
      if ((e >>= 1) != 0) base = base * base;
    }
    return acc;
  }

  Mat inverse() const;

  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Mat& m) {
    for (std::uint32_t i = 0; i < m.rows_; ++i) {
      for (std::uint32_t j = 0; j < m.cols_; ++j) {
        if (j) os << ' ';
        os << m.raw(i, j);
      }
      os << '\n';
    }
    return os;
  }

 private:
  void check_same_shape(const Mat& o, const char* op) const {
    if (modulus() != o.modulus())
      throw std::invalid_argument(std::string("Mat::") + op + ": modulus mismatch");
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string("Mat::") + op + ": dimension mismatch");
  }

  std::uint32_t rows_, cols_;
  Fp field_;
  std::vector<std::uint32_t> a_;
};

inline Mat operator*(Fe c, const Mat& m) { return m.scaled(c); }

struct RrefResult {
  Mat r;
  std::uint32_t rank;
  std::vector<std::uint32_t> pivot_cols;
};

namespace detail {

/// Bit-packed row-reduction for p = 2. Same observable result as the
/// generic path, roughly 64x faster on the wide systems the similarity
/// engine solves.
inline RrefResult rref_gf2(const Mat& m) {
  const std::uint32_t rows = m.rows(), cols = m.cols();
  const std::uint32_t words = (cols + 63) / 64;
  std::vector<std::uint64_t> b(std::size_t{rows} * words, 0);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j)
      if (m.raw(i, j)) b[std::size_t{i} * words + (j >> 6)] |= std::uint64_t{1} << (j & 63);

  auto bit = [&](std::uint32_t i, std::uint32_t j) -> bool {
    return (b[std::size_t{i} * words + (j >> 6)] >> (j & 63)) & 1;
  };
  std::vector<std::uint32_t> pivots;
  std::uint32_t r = 0;
  for (std::uint32_t c = 0; c < cols && r < rows; ++c) {
    std::uint32_t piv = r;
    while (piv < rows && !bit(piv, c)) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::uint32_t w = 0; w < words; ++w)
        std::swap(b[std::size_t{piv} * words + w], b[std::size_t{r} * words + w]);
    const std::uint64_t* prow = &b[std::size_t{r} * words];
    const std::uint32_t w0 = c >> 6;
    for (std::uint32_t i = 0; i < rows; ++i) {
      if (i == r || !bit(i, c)) continue;
      std::uint64_t* row = &b[std::size_t{i} * words];
      for (std::uint32_t w = w0; w < words; ++w) row[w] ^= prow[w];
    }
    pivots.push_back(c);
    ++r;
  }
  Mat out(rows, cols, m.field());
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j)
      if (bit(i, j)) out.set_raw(i, j, 1);
  return RrefResult{std::move(out), r, std::move(pivots)};
}

/// Field-generic elimination. Works for every p including 2; the packed
/// variant above must produce the same result bit for bit.
inline RrefResult rref_generic(const Mat& m) {
  Mat r = m;
  const Fp& f = m.field();
  const std::uint32_t rows = m.rows(), cols = m.cols();
  std::vector<std::uint32_t> pivots;
  std::uint32_t rk = 0;
  for (std::uint32_t c = 0; c < cols && rk < rows; ++c) {
    std::uint32_t piv = rk;
    while (piv < rows && r.raw(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rk)
      for (std::uint32_t j = c; j < cols; ++j) {
        std::uint32_t t = r.raw(rk, j);
        r.set_raw(rk, j, r.raw(piv, j));
        r.set_raw(piv, j, t);
      }
    std::uint32_t scale = f.inv(r.raw(rk, c));
    if (scale != 1)
      for (std::uint32_t j = c; j < cols; ++j)
        r.set_raw(rk, j, f.mul(scale, r.raw(rk, j)));
    for (std::uint32_t i = 0; i < rows; ++i) {
      if (i == rk) continue;
      std::uint32_t factor = r.raw(i, c);
      if (factor == 0) continue;
      std::uint32_t neg = f.neg(factor);
      for (std::uint32_t j = c; j < cols; ++j)
        r.set_raw(i, j, f.reduce(r.raw(i, j) + std::uint64_t{neg} * r.raw(rk, j)));
    }
    pivots.push_back(c);
    ++rk;
  }
  return RrefResult{std::move(r), rk, std::move(pivots)};
}

}  // namespace detail

/// Reduced row echelon form with exact rank and pivot columns.
/// First-nonzero pivoting; the result is the canonical RREF of the input.
inline RrefResult rref(const Mat& m) {
  return m.modulus() == 2 ? detail::rref_gf2(m) : detail::rref_generic(m);
}

inline std::uint32_t rank(const Mat& m) { return rref(m).rank; }

/// Basis of the right null space {v : Av = 0} as column vectors, one per
/// free column of the RREF, in ascending free-column order.
inline std::vector<Mat> kernel_basis(const Mat& m) {
  RrefResult rr = rref(m);
  const std::uint32_t cols = m.cols();
  const Fp& f = m.field();
  std::vector<bool> is_pivot(cols, false);
  for (std::uint32_t c : rr.pivot_cols) is_pivot[c] = true;
  std::vector<Mat> basis;
  basis.reserve(cols - rr.rank);
  for (std::uint32_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    Mat v(cols, 1, f);
    v.set_raw(fc, 0, 1 % f.modulus());
    for (std::uint32_t i = 0; i < rr.rank; ++i)
      v.set_raw(rr.pivot_cols[i], 0, f.neg(rr.r.raw(i, fc)));
    basis.push_back(std::move(v));
  }
  return basis;
}

inline Mat Mat::inverse() const {
  if (!is_square()) throw std::invalid_argument("Mat::inverse: not square");
  const std::uint32_t n = rows_;
  Mat aug(n, 2 * n, field_);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) aug.set_raw(i, j, raw(i, j));
    aug.set_raw(i, n + i, 1 % modulus());
  }
  RrefResult rr = rref(aug);
  if (rr.rank < n || rr.pivot_cols[n - 1] != n - 1)
    throw std::domain_error("Mat::inverse: singular matrix");
  Mat inv(n, n, field_);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) inv.set_raw(i, j, rr.r.raw(i, n + j));
  return inv;
}

inline bool is_invertible(const Mat& m) {
  return m.is_square() && rank(m) == m.rows();
}

/// True iff A^k = 0.
inline bool is_nilpotent_with_index(const Mat& m, std::uint32_t k) {
  if (!m.is_square()) throw std::invalid_argument("is_nilpotent_with_index: not square");
  return m.pow(k).is_zero();
}

}  // namespace pairlab
