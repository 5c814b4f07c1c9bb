#pragma once

// Test-only oracles and generators. Everything here is deliberately
// independent of the implementation paths it checks: the polynomial oracle
// multiplies matrices from scratch per monomial, and the similarity oracle
// enumerates the full general linear group.

#include <cstdint>
#include <vector>

#include "pairlab/construction.hpp"
#include "pairlab/pair.hpp"
#include "pairlab/rng.hpp"
#include "pairlab/similarity.hpp"

namespace testing_oracles {

using namespace pairlab;

/// f(A, B) by expanding each monomial with repeated multiplication, no
/// power memoization and no shared code with eval_poly_pair.
inline Mat naive_poly_eval(const BivarPoly& f, const MatPair& p) {
  const std::uint32_t n = p.size();
  Mat acc(n, n, p.field());
  for (const auto& [ij, c] : f.terms()) {
    Mat term = Mat::identity(n, p.field());
    for (std::uint32_t k = 0; k < ij.first; ++k) term = term * p.a;
    for (std::uint32_t k = 0; k < ij.second; ++k) term = term * p.b;
    acc = acc + term.scaled(Fe(c, p.a.modulus()));
  }
  return acc;
}

/// All invertible n x n matrices over GF(p), by scanning every matrix.
/// Only sensible for tiny n and p (GL(3, GF(2)) has 168 elements).
inline std::vector<Mat> enumerate_gl(std::uint32_t n, const Fp& f) {
  const std::uint32_t p = f.modulus();
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < n * n; ++i) total *= p;
  std::vector<Mat> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    Mat m(n, n, f);
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j) {
        m.set_raw(i, j, static_cast<std::uint32_t>(c % p));
        c /= p;
      }
    if (is_invertible(m)) out.push_back(std::move(m));
  }
  return out;
}

/// Ground-truth pair similarity: try every group element as conjugator.
inline bool brute_force_similar(const MatPair& p1, const MatPair& p2,
                                const std::vector<Mat>& gl) {
  for (const Mat& s : gl) {
    Mat si = s.inverse();
    if (si * p1.a * s == p2.a && si * p1.b * s == p2.b) return true;
  }
  return false;
}

/// Random commuting pair: B is a random polynomial in A, so AB = BA holds
/// by construction.
inline MatPair random_commuting_pair(Rng& rng, std::uint32_t n, const Fp& f) {
  Mat a = rng.matrix(n, n, f);
  Mat b(n, n, f);
  Mat power = Mat::identity(n, f);
  for (std::uint32_t d = 0; d <= 3; ++d) {
    b = b + power.scaled(rng.field_elem(f));
    power = power * a;
  }
  return MatPair(a, b);
}

/// Random polynomial of total degree <= deg with a sparse support.
inline BivarPoly random_poly(Rng& rng, const Fp& f, std::uint32_t deg) {
  BivarPoly poly(f);
  for (std::uint32_t i = 0; i <= deg; ++i)
    for (std::uint32_t j = 0; i + j <= deg; ++j)
      if (rng.below(3) == 0) poly.set_coeff(i, j, rng.field_elem(f));
  return poly;
}

inline QuadCoeffs random_quad(Rng& rng, const Fp& f) {
  return QuadCoeffs(rng.nonzero_field_elem(f).value, rng.nonzero_field_elem(f).value,
                    rng.field_elem(f).value, rng.field_elem(f).value,
                    rng.field_elem(f).value, rng.field_elem(f).value,
                    rng.field_elem(f).value, f);
}

inline BasePair random_base(Rng& rng, std::uint32_t n, const Fp& f) {
  return BasePair(rng.matrix(n, n, f), rng.matrix(n, n, f));
}

inline BasePair random_unipotent_base(Rng& rng, std::uint32_t n, const Fp& f) {
  return BasePair(rng.unipotent(n, f), rng.unipotent(n, f));
}

inline BasePair conjugated_base(const BasePair& b, const Mat& x) {
  Mat xi = x.inverse();
  return BasePair(xi * b.m * x, xi * b.n * x);
}

/// Span membership via one extra elimination: v is in the span of the basis
/// iff appending it does not raise the rank.
inline bool in_span(const std::vector<Mat>& basis, const Mat& v) {
  if (basis.empty()) return v.is_zero();
  const std::uint32_t cells = v.rows() * v.cols();
  const Fp& f = v.field();
  Mat stacked(static_cast<std::uint32_t>(basis.size()) + 1, cells, f);
  for (std::uint32_t r = 0; r < basis.size(); ++r)
    for (std::uint32_t i = 0; i < v.rows(); ++i)
      for (std::uint32_t j = 0; j < v.cols(); ++j)
        stacked.set_raw(r, i * v.cols() + j, basis[r].raw(i, j));
  Mat without = stacked;
  for (std::uint32_t i = 0; i < v.rows(); ++i)
    for (std::uint32_t j = 0; j < v.cols(); ++j)
      stacked.set_raw(static_cast<std::uint32_t>(basis.size()), i * v.cols() + j,
                      v.raw(i, j));
  return rank(stacked) == rank(without);
}

}  // namespace testing_oracles
