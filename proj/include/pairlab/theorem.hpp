#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairlab/lemma.hpp"
#include "pairlab/similarity.hpp"

namespace pairlab {

/// A pair of unipotent bases whose constructed pairs get compared.
struct TheoremInstance {
  BasePair base1;
  BasePair base2;

  TheoremInstance(BasePair b1, BasePair b2)
      : base1(std::move(b1)), base2(std::move(b2)) {
    if (base1.size() != base2.size() ||
        base1.field().modulus() != base2.field().modulus())
      throw std::invalid_argument("TheoremInstance: base size/modulus mismatch");
    if (!is_in_e1(base1) || !is_in_e1(base2))
      throw std::invalid_argument("TheoremInstance: bases must be unipotent");
  }
};

/// Full B matrix of the reduced pair, including the unconstrained corner
/// blocks: C^-1 B0g C for the chain conjugator C.
inline Mat bhat_full(const BasePair& base, const QuadCoeffs& q) {
  MatPair afbg = build_a0f_b0g(base, q);
  Mat c = lemma1_conjugator(base, q);
  Mat ci = lemma1_conjugator_inv(base, q);
  return ci * afbg.b * c;
}

/// Map a raw similarity witness X (conjugating the transformed first pair
/// onto the second) into the frame the structural analysis uses:
/// S = C^-1 X, so that A0 S = S A0 and Bhat(base1) S = S B0(base2).
inline Mat normalize_witness(const Mat& raw_witness, const BasePair& base1,
                             const QuadCoeffs& q) {
  return lemma1_conjugator_inv(base1, q) * raw_witness;
}

/// Blocks of a normalized witness, plus every structural identity the
/// witness must satisfy. Stripe indices are 0-based; in the coarse division
/// the stripes are grouped (0-2 | 3 | 4-6).
struct ProofTrace {
  Mat s;
  Mat y11, y22, y44;
  Mat z11, z12, z21, z22;
  std::uint32_t alpha, beta;
  bool shape_a_ok = false;   ///< coarse blocks (1,0),(2,0),(2,1) zero, (2,2)=(0,0)
  bool shape_b_ok = false;   ///< same pattern inside the leading coarse block
  bool eq6_ok = false;       ///< W Y22 = Y44 W
  bool eq7_ok = false;       ///< beta^3 T1 Y22 = alpha^2 Y22 T2
  bool z21_zero = false;
  bool z12_zero = false;
  bool scalar_law_ok = false;  ///< beta^3 = alpha^2
  std::vector<std::string> violations;

  bool all_ok() const noexcept {
    return shape_a_ok && shape_b_ok && eq6_ok && eq7_ok && z21_zero && z12_zero &&
           scalar_law_ok;
  }

  /// Fine block (i, j) of the witness in the 7-stripe layout.
  Mat y(std::uint32_t i, std::uint32_t j, const BlockLayout& layout) const {
    return extract_block(s, layout, i, j);
  }
};

/// Check the block structure a normalized witness is forced into. The
/// witness must already satisfy A0 S = S A0 and Bhat(base1) S = S B0(base2);
/// anything else is rejected up front.
inline ProofTrace check_proof_equations(const Mat& s, const BasePair& base1,
                                        const BasePair& base2, const QuadCoeffs& q) {
  const std::uint32_t n = base1.size();
  const Fp& f = base1.field();
  BlockLayout layout = p0_layout(n);

  Mat a0 = build_p0(base1).pair.a;
  Mat b0_2 = build_p0(base2).pair.b;
  Mat bhat = bhat_full(base1, q);
  if (a0 * s != s * a0)
    throw std::invalid_argument("check_proof_equations: A0 S = S A0 fails");
  if (bhat * s != s * b0_2)
    throw std::invalid_argument("check_proof_equations: Bhat S = S B0 fails");

  const std::uint32_t six = 6 * n;
  BlockLayout coarse = BlockLayout::square({six, n, six});
  BlockLayout fine3 = BlockLayout::square({2 * n, 2 * n, 2 * n});
  BlockLayout quad = BlockLayout::square({n, n});

  Mat s11 = extract_block(s, coarse, 0, 0);
  ProofTrace tr{
      s,
      extract_block(s11, fine3, 0, 0),  // Y11
      extract_block(s11, fine3, 1, 1),  // Y22
      extract_block(s, coarse, 1, 1),   // Y44
      Mat(n, n, f), Mat(n, n, f), Mat(n, n, f), Mat(n, n, f),
      q.alpha, q.beta};
  tr.z11 = extract_block(tr.y22, quad, 0, 0);
  tr.z12 = extract_block(tr.y22, quad, 0, 1);
  tr.z21 = extract_block(tr.y22, quad, 1, 0);
  tr.z22 = extract_block(tr.y22, quad, 1, 1);

  auto note = [&](bool ok, const std::string& what) {
    if (!ok) tr.violations.push_back(what);
    return ok;
  };

  tr.shape_a_ok = true;
  tr.shape_a_ok &= note(extract_block(s, coarse, 1, 0).is_zero(),
                        "coarse block (1,0) nonzero");
  tr.shape_a_ok &= note(extract_block(s, coarse, 2, 0).is_zero(),
                        "coarse block (2,0) nonzero");
  tr.shape_a_ok &= note(extract_block(s, coarse, 2, 1).is_zero(),
                        "coarse block (2,1) nonzero");
  tr.shape_a_ok &= note(extract_block(s, coarse, 2, 2) == s11,
                        "coarse block (2,2) != (0,0)");
  tr.shape_b_ok = true;
  tr.shape_b_ok &= note(extract_block(s11, fine3, 1, 0).is_zero(),
                        "leading block (1,0) nonzero");
  tr.shape_b_ok &= note(extract_block(s11, fine3, 2, 0).is_zero(),
                        "leading block (2,0) nonzero");
  tr.shape_b_ok &= note(extract_block(s11, fine3, 2, 1).is_zero(),
                        "leading block (2,1) nonzero");
  tr.shape_b_ok &= note(extract_block(s11, fine3, 2, 2) == tr.y11,
                        "leading block (2,2) != (0,0)");

  Mat w = build_w(n, f);
  tr.eq6_ok = note(w * tr.y22 == tr.y44 * w, "W Y22 != Y44 W");
  Fe b3 = f(f.pow(q.beta, 3));
  Fe a2 = f(f.pow(q.alpha, 2));
  Mat t1 = build_t(base1);
  Mat t2 = build_t(base2);
  tr.eq7_ok = note((t1 * tr.y22).scaled(b3) == (tr.y22 * t2).scaled(a2),
                   "beta^3 T1 Y22 != alpha^2 Y22 T2");
  tr.z21_zero = note(tr.z21.is_zero(), "Z21 nonzero");
  tr.z12_zero = note(tr.z12.is_zero(), "Z12 nonzero");
  tr.scalar_law_ok = note(b3 == a2, "beta^3 != alpha^2");
  return tr;
}

/// Pull the base conjugator out of a normalized witness: X = Z22, the
/// lower-right n x n corner of Y22. Requires the scalar law beta^3 = alpha^2;
/// the returned X is verified to satisfy X^-1 M1 X = M2, X^-1 N1 X = N2.
/// Failure of either check is a hard error: for a valid witness the block
/// analysis guarantees both.
inline Mat recover_base_similarity(const Mat& s, const QuadCoeffs& q,
                                   const BasePair& base1, const BasePair& base2) {
  const std::uint32_t n = base1.size();
  const Fp& f = base1.field();
  if (f.pow(q.beta, 3) != f.pow(q.alpha, 2))
    throw std::domain_error("recover_base_similarity: beta^3 != alpha^2");
  BlockLayout coarse = BlockLayout::square({6 * n, n, 6 * n});
  BlockLayout fine3 = BlockLayout::square({2 * n, 2 * n, 2 * n});
  BlockLayout quad = BlockLayout::square({n, n});
  Mat y22 = extract_block(extract_block(s, coarse, 0, 0), fine3, 1, 1);
  Mat x = extract_block(y22, quad, 1, 1);
  if (!is_invertible(x))
    throw std::runtime_error("recover_base_similarity: Z22 is singular");
  Mat xi = x.inverse();
  if (xi * base1.m * x != base2.m || xi * base1.n * x != base2.n)
    throw std::runtime_error(
        "recover_base_similarity: recovered X fails the conjugation check");
  return x;
}

/// Sanity direction: a known base similarity lifts to polynomial similarity
/// of the constructed pairs, discovered with the identity coefficients.
inline bool verify_forward(const TheoremInstance& inst, std::uint64_t budget = 64,
                           std::uint64_t seed = 0) {
  SimilarityVerdict base =
      are_similar_pairs(inst.base1.as_pair(), inst.base2.as_pair(), budget, seed);
  if (!base.similar())
    throw std::invalid_argument("verify_forward: bases are not similar");
  Mat lift = lift_similarity(*base.witness, inst.base1, inst.base2);
  (void)lift;  // construction verifies the conjugation identities
  PolySimilarityResult poly =
      are_poly_similar(build_p0(inst.base1).pair, build_p0(inst.base2).pair,
                       budget, seed);
  return poly.similar && poly.q.has_value() && poly.q->is_identity();
}

struct ConverseReport {
  PolySimilarityResult poly;
  SimilarityVerdict base;
  bool implication_ok = false;  ///< poly-similar => base-similar, and back
  std::optional<ProofTrace> trace;
  std::optional<Mat> recovered_x;
  bool scalar_law_ok = false;
};

namespace detail {
inline std::string converse_dump(const TheoremInstance& inst,
                                 const PolySimilarityResult& poly,
                                 const SimilarityVerdict& base) {
  std::ostringstream os;
  os << "p=" << inst.base1.field().modulus() << " n=" << inst.base1.size()
     << "\nM1:\n" << inst.base1.m << "N1:\n" << inst.base1.n
     << "M2:\n" << inst.base2.m << "N2:\n" << inst.base2.n
     << "poly-similar=" << (poly.similar ? "true" : "false")
     << " (certified=" << (poly.certified ? "true" : "false")
     << ", tuples=" << poly.tuples_checked << ")";
  if (poly.q) os << " q=" << poly.q->str();
  os << "\nbase-similar=" << (base.similar() ? "true" : "false")
     << " via " << base.method;
  return os.str();
}
}  // namespace detail

/// Full check of one instance: decide polynomial similarity of the
/// constructed pairs and plain similarity of the bases, enforce the
/// equivalence between them, and on positive instances run the block
/// analysis and base-conjugator recovery on the discovered witness.
/// An implication violation means the engine itself is broken, so it
/// aborts with a dump instead of returning.
inline ConverseReport verify_converse(const TheoremInstance& inst,
                                      std::uint64_t budget = 64,
                                      std::uint64_t seed = 0,
                                      std::uint64_t exhaustive_cap = kDefaultExhaustiveCap) {
  ConverseReport rep{
      are_poly_similar(build_p0(inst.base1).pair, build_p0(inst.base2).pair,
                       budget, seed, exhaustive_cap),
      are_similar_pairs(inst.base1.as_pair(), inst.base2.as_pair(), budget,
                        splitmix64(seed) + 1, exhaustive_cap)};

  if (rep.poly.similar && !rep.base.similar())
    throw std::logic_error(
        "verify_converse: constructed pairs polynomially similar but bases are "
        "not\n" + detail::converse_dump(inst, rep.poly, rep.base));
  if (rep.base.similar() && !rep.poly.similar)
    throw std::logic_error(
        "verify_converse: bases similar but polynomial similarity not found\n" +
        detail::converse_dump(inst, rep.poly, rep.base));
  rep.implication_ok = true;

  if (rep.poly.similar) {
    Mat s = normalize_witness(*rep.poly.witness, inst.base1, *rep.poly.q);
    rep.trace = check_proof_equations(s, inst.base1, inst.base2, *rep.poly.q);
    rep.scalar_law_ok = rep.trace->scalar_law_ok;
    if (rep.scalar_law_ok)
      rep.recovered_x =
          recover_base_similarity(s, *rep.poly.q, inst.base1, inst.base2);
  }
  return rep;
}

struct E1WildnessReport {
  SimilarityVerdict constructed;
  SimilarityVerdict base;
  bool iff_ok = false;
};

/// Check, in both directions, that the unitriangular pairs built from two
/// bases are similar exactly when the bases are. A certified violation would
/// falsify the construction and aborts.
inline E1WildnessReport verify_e1_wildness(const BasePair& base1,
                                           const BasePair& base2,
                                           std::uint64_t budget = 64,
                                           std::uint64_t seed = 0,
                                           std::uint64_t exhaustive_cap = kDefaultExhaustiveCap) {
  if (!is_in_e1(base1) || !is_in_e1(base2))
    throw std::invalid_argument("verify_e1_wildness: bases must be unipotent");
  E1WildnessReport rep{
      are_similar_pairs(build_e1_pair(base1), build_e1_pair(base2), budget, seed,
                        exhaustive_cap),
      are_similar_pairs(base1.as_pair(), base2.as_pair(), budget,
                        splitmix64(seed) + 1, exhaustive_cap)};
  rep.iff_ok = rep.constructed.similar() == rep.base.similar();
  if (!rep.iff_ok && rep.constructed.certified() && rep.base.certified())
    throw std::logic_error(
        "verify_e1_wildness: certified verdicts disagree (constructed " +
        std::string(rep.constructed.similar() ? "similar" : "not similar") +
        ", bases " + (rep.base.similar() ? "similar" : "not similar") + ")");
  return rep;
}

}  // namespace pairlab
