#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairlab/pair.hpp"
#include "pairlab/rng.hpp"

namespace pairlab {

/// Basis of the linear space {S : A2 S = S A1, B2 S = S B1} for two pairs
/// P1 = (A1, B1), P2 = (A2, B2). An invertible element of the span, when one
/// exists, conjugates P2 onto P1.
struct IntertwinerSpace {
  std::uint32_t n = 0;
  std::vector<Mat> basis;

  std::uint32_t dim() const noexcept { return static_cast<std::uint32_t>(basis.size()); }
};

/// Kernel of the stacked linear map S -> (A2 S - S A1, B2 S - S B1) on the
/// n^2 entries of S.
inline IntertwinerSpace intertwiner_space(const MatPair& p1, const MatPair& p2) {
  if (p1.size() != p2.size())
    throw std::invalid_argument("intertwiner_space: size mismatch");
  if (p1.a.modulus() != p2.a.modulus())
    throw std::invalid_argument("intertwiner_space: modulus mismatch");
  const std::uint32_t n = p1.size();
  const Fp& f = p1.field();
  Mat sys(2 * n * n, n * n, f);
  auto var = [n](std::uint32_t k, std::uint32_t l) { return k * n + l; };
  std::uint32_t row = 0;
  for (int part = 0; part < 2; ++part) {
    const Mat& x2 = part == 0 ? p2.a : p2.b;
    const Mat& x1 = part == 0 ? p1.a : p1.b;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j) {
        for (std::uint32_t k = 0; k < n; ++k) {
          std::uint32_t c = var(k, j);
          sys.set_raw(row, c, f.add(sys.raw(row, c), x2.raw(i, k)));
          c = var(i, k);
          sys.set_raw(row, c, f.sub(sys.raw(row, c), x1.raw(k, j)));
        }
        ++row;
      }
  }
  IntertwinerSpace space;
  space.n = n;
  for (const Mat& v : kernel_basis(sys)) {
    Mat s(n, n, f);
    for (std::uint32_t k = 0; k < n; ++k)
      for (std::uint32_t l = 0; l < n; ++l) s.set_raw(k, l, v.raw(var(k, l), 0));
    space.basis.push_back(std::move(s));
  }
  return space;
}

/// Result of searching the span of an intertwiner basis for an invertible
/// element.
struct InvertibleSearch {
  enum class Status {
    found,             ///< witness in hand, exact
    absent_certified,  ///< every combination enumerated, none invertible
    absent_sampled,    ///< sampling found nothing; failure_bound applies
    inconclusive       ///< sampling found nothing and no usable bound (n >= p)
  };
  Status status = Status::absent_certified;
  std::optional<Mat> witness;
  std::uint64_t combinations_checked = 0;
  /// For absent_sampled: probability that an invertible element exists yet
  /// every sample missed it, i.e. (n/p)^trials by Schwartz-Zippel.
  double failure_bound = 0.0;
};

inline constexpr std::uint64_t kDefaultExhaustiveCap = 2'000'000;

/// Search the span for an invertible element. Below the cap the p^dim
/// combinations are enumerated in lexicographic coefficient order and the
/// answer is certified either way. Above it, `budget` uniform random samples
/// are drawn; a found witness is still exact, absence is probabilistic with
/// the Schwartz-Zippel bound (vacuous when n >= p, reported inconclusive).
inline InvertibleSearch find_invertible(const IntertwinerSpace& space,
                                        std::uint64_t budget, std::uint64_t seed,
                                        std::uint64_t exhaustive_cap = kDefaultExhaustiveCap) {
  InvertibleSearch out;
  const std::uint32_t d = space.dim();
  if (d == 0) {
    out.status = InvertibleSearch::Status::absent_certified;
    return out;
  }
  const Fp& f = space.basis.front().field();
  const std::uint32_t p = f.modulus();
  const std::uint32_t n = space.n;

  // total = p^d, saturating
  std::uint64_t total = 1;
  bool overflow = false;
  for (std::uint32_t i = 0; i < d; ++i) {
    if (total > exhaustive_cap / p + 1) { overflow = true; break; }
    total *= p;
  }

  if (!overflow && total <= exhaustive_cap) {
    // Odometer over coefficient digits, most significant first; the running
    // combination is updated incrementally (a digit wrap adds p copies of a
    // basis matrix, which is a no-op mod p).
    std::vector<std::uint32_t> digit(d, 0);
    Mat s(n, n, f);
    std::uint64_t checked = 1;  // the zero combination
    auto add_basis = [&](std::uint32_t j) {
      const Mat& b = space.basis[j];
      for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t k = 0; k < n; ++k)
          s.set_raw(i, k, f.add(s.raw(i, k), b.raw(i, k)));
    };
    for (;;) {
      int j = static_cast<int>(d) - 1;
      while (j >= 0) {
        add_basis(static_cast<std::uint32_t>(j));
        if (++digit[static_cast<std::size_t>(j)] < p) break;
        digit[static_cast<std::size_t>(j)] = 0;
        --j;
      }
      if (j < 0) break;
      ++checked;
      if (is_invertible(s)) {
        out.status = InvertibleSearch::Status::found;
        out.witness = s;
        out.combinations_checked = checked;
        return out;
      }
    }
    out.status = InvertibleSearch::Status::absent_certified;
    out.combinations_checked = total;
    return out;
  }

  Rng rng(seed);
  for (std::uint64_t t = 0; t < budget; ++t) {
    Mat s(n, n, f);
    for (std::uint32_t j = 0; j < d; ++j) {
      std::uint32_t c = static_cast<std::uint32_t>(rng.below(p));
      if (c == 0) continue;
      const Mat& b = space.basis[j];
      for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t k = 0; k < n; ++k)
          s.set_raw(i, k, f.reduce(s.raw(i, k) + std::uint64_t{c} * b.raw(i, k)));
    }
    ++out.combinations_checked;
    if (is_invertible(s)) {
      out.status = InvertibleSearch::Status::found;
      out.witness = s;
      return out;
    }
  }
  if (n < p) {
    out.status = InvertibleSearch::Status::absent_sampled;
    out.failure_bound =
        std::pow(static_cast<double>(n) / static_cast<double>(p),
                 static_cast<double>(budget));
  } else {
    out.status = InvertibleSearch::Status::inconclusive;
    out.failure_bound = 1.0;
  }
  return out;
}

/// (A, B) -> (S^-1 A S, S^-1 B S).
inline MatPair conjugate_pair(const MatPair& p, const Mat& s) {
  if (s.rows() != p.size() || !s.is_square())
    throw std::invalid_argument("conjugate_pair: conjugator size mismatch");
  if (s.modulus() != p.a.modulus())
    throw std::invalid_argument("conjugate_pair: modulus mismatch");
  Mat si = s.inverse();
  return MatPair(si * p.a * s, si * p.b * s);
}

/// Ranks of a fixed word list in (A, B). Equal profiles are necessary for
/// simultaneous similarity, so a mismatch certifies non-similarity cheaply;
/// a match decides nothing. The list is fixed for reproducibility:
///   A, B, A+B, AB, BA, AB-BA, A^2, B^2, AB^2, B^2A
inline std::vector<std::uint32_t> pair_rank_profile(const MatPair& p) {
  Mat ab = p.a * p.b;
  Mat ba = p.b * p.a;
  Mat b2 = p.b * p.b;
  const Mat words[] = {p.a,       p.b,       p.a + p.b, ab,        ba,
                       ab - ba,   p.a * p.a, b2,        p.a * b2,  b2 * p.a};
  std::vector<std::uint32_t> profile;
  profile.reserve(std::size(words));
  for (const Mat& w : words) profile.push_back(rank(w));
  return profile;
}

struct SimilarityVerdict {
  enum class Outcome { similar, not_similar_certified, not_similar_probabilistic };
  Outcome outcome = Outcome::not_similar_certified;
  /// For similar: an invertible S with conjugate_pair(P1, S) = P2, verified
  /// by explicit conjugation before being returned.
  std::optional<Mat> witness;
  /// For not_similar_probabilistic: bound on the probability the verdict is
  /// wrong; 1.0 means the search was inconclusive.
  double failure_bound = 0.0;
  /// How the verdict was reached (for reports).
  std::string method;

  bool similar() const noexcept { return outcome == Outcome::similar; }
  bool certified() const noexcept {
    return outcome != Outcome::not_similar_probabilistic;
  }
};

/// Decide simultaneous similarity of two pairs. Certified-negative routes:
/// rank-profile mismatch, empty or exhaustively searched intertwiner space,
/// and intertwiner/endomorphism dimension comparison (isomorphic pairs force
/// dim Hom(P2,P1) = dim End(P1) = dim End(P2), so a mismatch is exact).
inline SimilarityVerdict are_similar_pairs(const MatPair& p1, const MatPair& p2,
                                           std::uint64_t budget = 64,
                                           std::uint64_t seed = 0,
                                           std::uint64_t exhaustive_cap = kDefaultExhaustiveCap) {
  if (p1.size() != p2.size())
    throw std::invalid_argument("are_similar_pairs: size mismatch");
  if (p1.a.modulus() != p2.a.modulus())
    throw std::invalid_argument("are_similar_pairs: modulus mismatch");
  SimilarityVerdict v;
  if (p1 == p2) {
    v.outcome = SimilarityVerdict::Outcome::similar;
    v.witness = Mat::identity(p1.size(), p1.field());
    v.method = "identical";
    return v;
  }
  if (pair_rank_profile(p1) != pair_rank_profile(p2)) {
    v.outcome = SimilarityVerdict::Outcome::not_similar_certified;
    v.method = "rank-profile";
    return v;
  }
  // Elements here satisfy A1 S = S A2, so an invertible S conjugates P1 to P2.
  IntertwinerSpace space = intertwiner_space(p2, p1);
  if (space.dim() == 0) {
    v.outcome = SimilarityVerdict::Outcome::not_similar_certified;
    v.method = "empty-intertwiner";
    return v;
  }
  InvertibleSearch search = find_invertible(space, budget, seed, exhaustive_cap);
  if (search.status == InvertibleSearch::Status::found) {
    const Mat& s = *search.witness;
    if (conjugate_pair(p1, s) != p2)
      throw std::logic_error("are_similar_pairs: witness failed verification");
    v.outcome = SimilarityVerdict::Outcome::similar;
    v.witness = s;
    v.method = "intertwiner-witness";
    return v;
  }
  if (search.status == InvertibleSearch::Status::absent_certified) {
    v.outcome = SimilarityVerdict::Outcome::not_similar_certified;
    v.method = "exhausted-intertwiner";
    return v;
  }
  std::uint32_t end1 = intertwiner_space(p1, p1).dim();
  std::uint32_t end2 = intertwiner_space(p2, p2).dim();
  if (space.dim() != end1 || space.dim() != end2) {
    v.outcome = SimilarityVerdict::Outcome::not_similar_certified;
    v.method = "hom-dimension";
    return v;
  }
  v.outcome = SimilarityVerdict::Outcome::not_similar_probabilistic;
  v.failure_bound = search.failure_bound;
  v.method = search.status == InvertibleSearch::Status::inconclusive
                 ? "sampling-inconclusive"
                 : "sampling";
  return v;
}

struct PolySimilarityResult {
  bool similar = false;
  /// True when the verdict carries no probabilistic caveat: a verified
  /// witness, or certified non-similarity for every coefficient tuple.
  bool certified = false;
  std::optional<QuadCoeffs> q;
  std::optional<Mat> witness;
  std::uint64_t tuples_checked = 0;

  bool similar_value() const noexcept { return similar; }
};

/// Decide polynomial similarity of two pairs in N23: scan the quadratic
/// coefficient tuples in enumeration order and test whether the transformed
/// first pair is similar to the second. Returns the lowest-index witnessing
/// tuple. Zero pairs are polynomially similar exactly to zero pairs of the
/// same size (substitutions without constant term preserve the generated
/// nilpotent algebra, so a nonzero pair never maps to zero).
inline PolySimilarityResult are_poly_similar(const MatPair& p1, const MatPair& p2,
                                             std::uint64_t budget = 64,
                                             std::uint64_t seed = 0,
                                             std::uint64_t exhaustive_cap = kDefaultExhaustiveCap) {
  if (p1.size() != p2.size())
    throw std::invalid_argument("are_poly_similar: size mismatch");
  if (p1.a.modulus() != p2.a.modulus())
    throw std::invalid_argument("are_poly_similar: modulus mismatch");
  if (!check_n23(p1) || !check_n23(p2))
    throw std::invalid_argument("are_poly_similar: inputs must be in N23");
  const Fp& f = p1.field();
  PolySimilarityResult out;
  if (p1.is_zero() || p2.is_zero()) {
    out.certified = true;
    if (p1.is_zero() && p2.is_zero()) {
      out.similar = true;
      out.q = QuadCoeffs::identity(f);
      out.witness = Mat::identity(p1.size(), f);
    }
    return out;
  }
  const std::uint64_t total = quad_coeffs_count(f);
  bool all_certified = true;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    QuadCoeffs q = quad_coeffs_at(f, idx);
    MatPair transformed = apply_equivalence(p1, q);
    SimilarityVerdict v = are_similar_pairs(transformed, p2, budget,
                                            trial_seed(seed, idx), exhaustive_cap);
    out.tuples_checked = idx + 1;
    if (v.similar()) {
      out.similar = true;
      out.certified = true;
      out.q = q;
      out.witness = v.witness;
      return out;
    }
    all_certified = all_certified && v.certified();
  }
  out.certified = all_certified;
  return out;
}

}  // namespace pairlab
