#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairlab/matrix.hpp"

namespace pairlab {

/// A division of a matrix into stripes of blocks. Row and column stripe
/// size lists are independent; offsets are precomputed.
class BlockLayout {
 public:
  BlockLayout(std::vector<std::uint32_t> row_stripes,
              std::vector<std::uint32_t> col_stripes)
      : row_stripes_(std::move(row_stripes)), col_stripes_(std::move(col_stripes)) {
    row_off_ = offsets(row_stripes_);
    col_off_ = offsets(col_stripes_);
  }

  static BlockLayout square(std::vector<std::uint32_t> stripes) {
    return BlockLayout(stripes, stripes);
  }

  std::uint32_t block_rows() const noexcept {
    return static_cast<std::uint32_t>(row_stripes_.size());
  }
  std::uint32_t block_cols() const noexcept {
    return static_cast<std::uint32_t>(col_stripes_.size());
  }
  std::uint32_t rows_total() const noexcept { return row_off_.back(); }
  std::uint32_t cols_total() const noexcept { return col_off_.back(); }
  std::uint32_t row_stripe(std::uint32_t i) const { return row_stripes_.at(i); }
  std::uint32_t col_stripe(std::uint32_t j) const { return col_stripes_.at(j); }
  std::uint32_t row_offset(std::uint32_t i) const { return row_off_.at(i); }
  std::uint32_t col_offset(std::uint32_t j) const { return col_off_.at(j); }
  const std::vector<std::uint32_t>& row_stripes() const noexcept { return row_stripes_; }
  const std::vector<std::uint32_t>& col_stripes() const noexcept { return col_stripes_; }

 private:
  static std::vector<std::uint32_t> offsets(const std::vector<std::uint32_t>& s) {
    std::vector<std::uint32_t> off(s.size() + 1, 0);
    for (std::size_t i = 0; i < s.size(); ++i) off[i + 1] = off[i] + s[i];
    return off;
  }

  std::vector<std::uint32_t> row_stripes_, col_stripes_;
  std::vector<std::uint32_t> row_off_, col_off_;
};

using BlockIndex = std::pair<std::uint32_t, std::uint32_t>;
using BlockMap = std::map<BlockIndex, Mat>;

/// Assemble a matrix from blocks keyed by (stripe row, stripe col), 0-based.
/// Unsupplied blocks are zero. Each block must match its stripe dimensions.
inline Mat assemble_blocks(const BlockLayout& layout, const BlockMap& blocks,
                           const Fp& field) {
  Mat out(layout.rows_total(), layout.cols_total(), field);
  for (const auto& [idx, blk] : blocks) {
    auto [bi, bj] = idx;
    if (bi >= layout.block_rows() || bj >= layout.block_cols())
      throw std::invalid_argument("assemble_blocks: block index out of range");
    if (blk.rows() != layout.row_stripe(bi) || blk.cols() != layout.col_stripe(bj))
      throw std::invalid_argument(
          "assemble_blocks: block (" + std::to_string(bi) + "," + std::to_string(bj) +
          ") is " + blk.shape_str() + ", stripe wants " +
          std::to_string(layout.row_stripe(bi)) + "x" +
          std::to_string(layout.col_stripe(bj)));
    if (blk.modulus() != field.modulus())
      throw std::invalid_argument("assemble_blocks: modulus mismatch");
    const std::uint32_t r0 = layout.row_offset(bi), c0 = layout.col_offset(bj);
    for (std::uint32_t i = 0; i < blk.rows(); ++i)
      for (std::uint32_t j = 0; j < blk.cols(); ++j)
        out.set_raw(r0 + i, c0 + j, blk.raw(i, j));
  }
  return out;
}

inline Mat extract_block(const Mat& m, const BlockLayout& layout,
                         std::uint32_t bi, std::uint32_t bj) {
  if (m.rows() != layout.rows_total() || m.cols() != layout.cols_total())
    throw std::invalid_argument("extract_block: layout does not match matrix");
  if (bi >= layout.block_rows() || bj >= layout.block_cols())
    throw std::invalid_argument("extract_block: block index out of range");
  Mat blk(layout.row_stripe(bi), layout.col_stripe(bj), m.field());
  const std::uint32_t r0 = layout.row_offset(bi), c0 = layout.col_offset(bj);
  for (std::uint32_t i = 0; i < blk.rows(); ++i)
    for (std::uint32_t j = 0; j < blk.cols(); ++j)
      blk.set_raw(i, j, m.raw(r0 + i, c0 + j));
  return blk;
}

/// Block-diagonal matrix from per-stripe square blocks.
inline Mat block_diag(const BlockLayout& layout, const std::vector<Mat>& diag,
                      const Fp& field) {
  if (diag.size() != layout.block_rows())
    throw std::invalid_argument("block_diag: wrong number of blocks");
  BlockMap blocks;
  for (std::uint32_t i = 0; i < diag.size(); ++i) blocks.emplace(BlockIndex{i, i}, diag[i]);
  return assemble_blocks(layout, blocks, field);
}

}  // namespace pairlab
