#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairlab/matrix.hpp"

namespace pairlab {

/// A pair of square matrices of the same size over the same field.
struct MatPair {
  Mat a;
  Mat b;

  MatPair(Mat a_, Mat b_) : a(std::move(a_)), b(std::move(b_)) {
    if (!a.is_square() || !b.is_square())
      throw std::invalid_argument("MatPair: matrices must be square");
    if (a.rows() != b.rows())
      throw std::invalid_argument("MatPair: size mismatch");
    if (a.modulus() != b.modulus())
      throw std::invalid_argument("MatPair: modulus mismatch");
  }

  std::uint32_t size() const noexcept { return a.rows(); }
  const Fp& field() const noexcept { return a.field(); }
  bool is_zero() const noexcept { return a.is_zero() && b.is_zero(); }

  friend bool operator==(const MatPair& x, const MatPair& y) {
    return x.a == y.a && x.b == y.b;
  }
  friend bool operator!=(const MatPair& x, const MatPair& y) { return !(x == y); }
};

inline bool check_commuting(const MatPair& p) { return p.a * p.b == p.b * p.a; }

/// Membership test for the class of commuting pairs with A^2 = 0, B^3 = 0
/// and AB^2 = 0.
inline bool check_n23(const MatPair& p) {
  if (!check_commuting(p)) return false;
  if (!(p.a * p.a).is_zero()) return false;
  Mat b2 = p.b * p.b;
  if (!(b2 * p.b).is_zero()) return false;
  return (p.a * b2).is_zero();
}

/// Bivariate polynomial over GF(p), sparse map from (deg_x, deg_y) to a
/// nonzero coefficient.
class BivarPoly {
 public:
  explicit BivarPoly(const Fp& field) : field_(field) {}

  const Fp& field() const noexcept { return field_; }

  void set_coeff(std::uint32_t i, std::uint32_t j, Fe c) {
    if (c.modulus != field_.modulus())
      throw std::invalid_argument("BivarPoly::set_coeff: modulus mismatch");
    if (c.is_zero())
      coeff_.erase({i, j});
    else
      coeff_[{i, j}] = c.value;
  }
  void set_coeff(std::uint32_t i, std::uint32_t j, std::int64_t c) {
    set_coeff(i, j, field_(c));
  }

  Fe coeff(std::uint32_t i, std::uint32_t j) const {
    auto it = coeff_.find({i, j});
    return Fe(it == coeff_.end() ? 0 : it->second, field_.modulus());
  }

  const std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>& terms()
      const noexcept {
    return coeff_;
  }

  std::uint32_t total_degree() const noexcept {
    std::uint32_t d = 0;
    for (const auto& [ij, c] : coeff_) d = std::max(d, ij.first + ij.second);
    return d;
  }

  friend bool operator==(const BivarPoly& x, const BivarPoly& y) {
    return x.field_.modulus() == y.field_.modulus() && x.coeff_ == y.coeff_;
  }

 private:
  Fp field_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> coeff_;
};

/// f(A, B) = sum c_ij A^i B^j with A^0 B^0 = I. Only defined on commuting
/// pairs; any other input is rejected rather than silently ordered.
inline Mat eval_poly_pair(const BivarPoly& f, const MatPair& p) {
  if (f.field().modulus() != p.a.modulus())
    throw std::invalid_argument("eval_poly_pair: modulus mismatch");
  if (!check_commuting(p))
    throw std::invalid_argument("eval_poly_pair: pair does not commute");
  std::uint32_t max_i = 0, max_j = 0;
  for (const auto& [ij, c] : f.terms()) {
    max_i = std::max(max_i, ij.first);
    max_j = std::max(max_j, ij.second);
  }
  const Fp& fld = p.field();
  const std::uint32_t n = p.size();
  std::vector<Mat> pow_a, pow_b;
  pow_a.reserve(max_i + 1);
  pow_b.reserve(max_j + 1);
  pow_a.push_back(Mat::identity(n, fld));
  pow_b.push_back(Mat::identity(n, fld));
  for (std::uint32_t i = 1; i <= max_i; ++i) pow_a.push_back(pow_a.back() * p.a);
  for (std::uint32_t j = 1; j <= max_j; ++j) pow_b.push_back(pow_b.back() * p.b);
  Mat out(n, n, fld);
  for (const auto& [ij, c] : f.terms()) {
    Mat term = pow_a[ij.first] * pow_b[ij.second];
    out = out + term.scaled(Fe(c, fld.modulus()));
  }
  return out;
}

/// Admissibility of a substitution pair: no constant terms and nonsingular
/// Jacobian at the origin.
inline bool check_admissible(const BivarPoly& f, const BivarPoly& g) {
  if (!f.coeff(0, 0).is_zero() || !g.coeff(0, 0).is_zero()) return false;
  Fe fx = f.coeff(1, 0), fy = f.coeff(0, 1);
  Fe gx = g.coeff(1, 0), gy = g.coeff(0, 1);
  return !(fx * gy - fy * gx).is_zero();
}

/// Coefficients of the quadratic substitution calculus:
///   f(x,y) = alpha x + alpha1 y^2 + alpha2 xy
///   g(x,y) = gamma x + beta y + beta1 y^2 + beta2 xy
/// with alpha, beta nonzero. The missing y term in f keeps f(A,B)^2 = 0 on
/// the pairs this calculus acts on, and makes the Jacobian determinant at
/// the origin equal alpha*beta, hence always admissible.
struct QuadCoeffs {
  std::uint32_t alpha, beta, gamma, alpha1, alpha2, beta1, beta2;
  std::uint32_t modulus;

  QuadCoeffs(std::uint32_t alpha_, std::uint32_t beta_, std::uint32_t gamma_,
             std::uint32_t alpha1_, std::uint32_t alpha2_, std::uint32_t beta1_,
             std::uint32_t beta2_, const Fp& field)
      : alpha(alpha_), beta(beta_), gamma(gamma_), alpha1(alpha1_),
        alpha2(alpha2_), beta1(beta1_), beta2(beta2_), modulus(field.modulus()) {
    const std::uint32_t p = field.modulus();
    for (std::uint32_t v : {alpha, beta, gamma, alpha1, alpha2, beta1, beta2})
      if (v >= p) throw std::invalid_argument("QuadCoeffs: coefficient not reduced");
    if (alpha == 0 || beta == 0)
      throw std::invalid_argument("QuadCoeffs: alpha and beta must be nonzero");
  }

  static QuadCoeffs identity(const Fp& field) {
    return QuadCoeffs(1, 1, 0, 0, 0, 0, 0, field);
  }

  bool is_identity() const noexcept {
    return alpha == 1 && beta == 1 && gamma == 0 && alpha1 == 0 && alpha2 == 0 &&
           beta1 == 0 && beta2 == 0;
  }

  friend bool operator==(const QuadCoeffs& x, const QuadCoeffs& y) {
    return x.alpha == y.alpha && x.beta == y.beta && x.gamma == y.gamma &&
           x.alpha1 == y.alpha1 && x.alpha2 == y.alpha2 && x.beta1 == y.beta1 &&
           x.beta2 == y.beta2 && x.modulus == y.modulus;
  }

  std::string str() const {
    return "(a=" + std::to_string(alpha) + ",b=" + std::to_string(beta) +
           ",g=" + std::to_string(gamma) + ",a1=" + std::to_string(alpha1) +
           ",a2=" + std::to_string(alpha2) + ",b1=" + std::to_string(beta1) +
           ",b2=" + std::to_string(beta2) + ")";
  }
};

inline std::pair<BivarPoly, BivarPoly> quad_to_polys(const QuadCoeffs& q,
                                                     const Fp& field) {
  if (q.modulus != field.modulus())
    throw std::invalid_argument("quad_to_polys: modulus mismatch");
  BivarPoly f(field), g(field);
  f.set_coeff(1, 0, Fe(q.alpha, q.modulus));
  f.set_coeff(0, 2, Fe(q.alpha1, q.modulus));
  f.set_coeff(1, 1, Fe(q.alpha2, q.modulus));
  g.set_coeff(1, 0, Fe(q.gamma, q.modulus));
  g.set_coeff(0, 1, Fe(q.beta, q.modulus));
  g.set_coeff(0, 2, Fe(q.beta1, q.modulus));
  g.set_coeff(1, 1, Fe(q.beta2, q.modulus));
  return {f, g};
}

/// (A, B) -> (f(A,B), g(A,B)) for the quadratic calculus. Input must satisfy
/// check_n23; the image does again.
inline MatPair apply_equivalence(const MatPair& p, const QuadCoeffs& q) {
  if (!check_n23(p))
    throw std::invalid_argument("apply_equivalence: input pair is not in N23");
  auto [f, g] = quad_to_polys(q, p.field());
  return MatPair(eval_poly_pair(f, p), eval_poly_pair(g, p));
}

/// Deterministic enumeration of all (p-1)^2 * p^5 coefficient tuples,
/// lexicographic on (alpha, beta, gamma, alpha1, alpha2, beta1, beta2)
/// with alpha, beta in [1, p) and the rest in [0, p).
inline std::uint64_t quad_coeffs_count(const Fp& field) {
  const std::uint64_t p = field.modulus();
  return (p - 1) * (p - 1) * p * p * p * p * p;
}

inline QuadCoeffs quad_coeffs_at(const Fp& field, std::uint64_t index) {
  if (index >= quad_coeffs_count(field))
    throw std::out_of_range("quad_coeffs_at: index out of range");
  const std::uint64_t p = field.modulus();
  std::uint32_t digits[7];
  const std::uint64_t radix[7] = {p - 1, p - 1, p, p, p, p, p};
  for (int k = 6; k >= 0; --k) {
    digits[k] = static_cast<std::uint32_t>(index % radix[k]);
    index /= radix[k];
  }
  return QuadCoeffs(digits[0] + 1, digits[1] + 1, digits[2], digits[3], digits[4],
                    digits[5], digits[6], field);
}

}  // namespace pairlab
