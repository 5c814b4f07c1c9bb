#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pairlab/block.hpp"
#include "pairlab/pair.hpp"
#include "pairlab/similarity.hpp"

namespace pairlab {

/// The parameter pair (M, N) a constructed pair is built around.
struct BasePair {
  Mat m;
  Mat n;

  BasePair(Mat m_, Mat n_) : m(std::move(m_)), n(std::move(n_)) {
    if (!m.is_square() || !n.is_square() || m.rows() != n.rows())
      throw std::invalid_argument("BasePair: matrices must be square, equal size");
    if (m.modulus() != n.modulus())
      throw std::invalid_argument("BasePair: modulus mismatch");
  }

  std::uint32_t size() const noexcept { return m.rows(); }
  const Fp& field() const noexcept { return m.field(); }
  MatPair as_pair() const { return MatPair(m, n); }

  friend bool operator==(const BasePair& x, const BasePair& y) {
    return x.m == y.m && x.n == y.n;
  }
};

/// 2n x 2n parameter carrier  T = [ 0  M ]
///                                [ I  N ]
inline Mat build_t(const BasePair& base) {
  const std::uint32_t n = base.size();
  const Fp& f = base.field();
  BlockLayout two = BlockLayout::square({n, n});
  BlockMap blocks;
  blocks.emplace(BlockIndex{0, 1}, base.m);
  blocks.emplace(BlockIndex{1, 0}, Mat::identity(n, f));
  blocks.emplace(BlockIndex{1, 1}, base.n);
  return assemble_blocks(two, blocks, f);
}

/// n x 2n selector  W = [ 0  I ].
inline Mat build_w(std::uint32_t n, const Fp& f) {
  if (n < 1) throw std::invalid_argument("build_w: n must be >= 1");
  Mat w(n, 2 * n, f);
  for (std::uint32_t i = 0; i < n; ++i) w.set_raw(i, n + i, 1 % f.modulus());
  return w;
}

/// Stripe sizes of the 7-stripe layout on an n x n base: the identity-block
/// positions force stripes 1,2,3,5,6,7 to the size of T (2n) and stripe 4 to
/// the row count of W (n), total 13n.
inline BlockLayout p0_layout(std::uint32_t n) {
  return BlockLayout::square({2 * n, 2 * n, 2 * n, n, 2 * n, 2 * n, 2 * n});
}

/// The constructed pair with its layout. Stripe indices below are 0-based.
struct P0Pair {
  MatPair pair;
  BlockLayout layout;
  std::uint32_t base_size;
};

/// Build the 13n x 13n pair (A0, B0):
///   A0 has identity blocks at (0,4), (1,5), (2,6);
///   B0 has identities at (0,2), (1,4), (4,6), T at (2,5) and W at (3,5).
/// The result lies in N23 for every base, which the constructor verifies.
inline P0Pair build_p0(const BasePair& base) {
  const std::uint32_t n = base.size();
  const Fp& f = base.field();
  BlockLayout layout = p0_layout(n);
  Mat i2n = Mat::identity(2 * n, f);

  BlockMap ablocks;
  ablocks.emplace(BlockIndex{0, 4}, i2n);
  ablocks.emplace(BlockIndex{1, 5}, i2n);
  ablocks.emplace(BlockIndex{2, 6}, i2n);

  BlockMap bblocks;
  bblocks.emplace(BlockIndex{0, 2}, i2n);
  bblocks.emplace(BlockIndex{1, 4}, i2n);
  bblocks.emplace(BlockIndex{2, 5}, build_t(base));
  bblocks.emplace(BlockIndex{3, 5}, build_w(n, f));
  bblocks.emplace(BlockIndex{4, 6}, i2n);

  MatPair pair(assemble_blocks(layout, ablocks, f),
               assemble_blocks(layout, bblocks, f));
  if (!check_n23(pair))
    throw std::logic_error("build_p0: constructed pair is not in N23");
  return P0Pair{std::move(pair), std::move(layout), n};
}

/// The 3n x 3n unitriangular pair
///   P = [ I I 0 ]      Q = [ I M 0 ]
///       [ 0 I I ]          [ 0 I N ]
///       [ 0 0 I ]          [ 0 0 I ]
/// whose simultaneous similarity tracks similarity of (M, N).
inline MatPair build_e1_pair(const BasePair& base) {
  const std::uint32_t n = base.size();
  const Fp& f = base.field();
  BlockLayout three = BlockLayout::square({n, n, n});
  Mat in = Mat::identity(n, f);
  BlockMap pb, qb;
  for (std::uint32_t i = 0; i < 3; ++i) {
    pb.emplace(BlockIndex{i, i}, in);
    qb.emplace(BlockIndex{i, i}, in);
  }
  pb.emplace(BlockIndex{0, 1}, in);
  pb.emplace(BlockIndex{1, 2}, in);
  qb.emplace(BlockIndex{0, 1}, base.m);
  qb.emplace(BlockIndex{1, 2}, base.n);
  return MatPair(assemble_blocks(three, pb, f), assemble_blocks(three, qb, f));
}

/// True iff both members are unipotent, i.e. all eigenvalues equal 1 over
/// the algebraic closure: (M - I)^n = 0 and (N - I)^n = 0.
inline bool is_in_e1(const BasePair& base) {
  const std::uint32_t n = base.size();
  Mat in = Mat::identity(n, base.field());
  return is_nilpotent_with_index(base.m - in, n) &&
         is_nilpotent_with_index(base.n - in, n);
}

/// Lift a base conjugator X (with X^-1 M1 X = M2, X^-1 N1 X = N2) to a
/// conjugator of the constructed pairs: S = diag(X2,X2,X2,X,X2,X2,X2) with
/// X2 = diag(X,X). S fixes A0 and carries B0(base1) to B0(base2); both
/// identities are verified before the lift is returned.
inline Mat lift_similarity(const Mat& x, const BasePair& base1,
                           const BasePair& base2) {
  if (base1.size() != base2.size() || x.rows() != base1.size() || !x.is_square())
    throw std::invalid_argument("lift_similarity: size mismatch");
  const std::uint32_t n = base1.size();
  const Fp& f = base1.field();
  BlockLayout two = BlockLayout::square({n, n});
  Mat x2 = block_diag(two, {x, x}, f);
  BlockLayout layout = p0_layout(n);
  Mat s = block_diag(layout, {x2, x2, x2, x, x2, x2, x2}, f);

  P0Pair p1 = build_p0(base1);
  P0Pair p2 = build_p0(base2);
  if (conjugate_pair(p1.pair, s) != p2.pair)
    throw std::invalid_argument(
        "lift_similarity: X does not conjugate base1 onto base2");
  return s;
}

}  // namespace pairlab
