#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "helpers.hpp"
#include "pairlab/block.hpp"
#include "pairlab/io.hpp"
#include "pairlab/matrix.hpp"
#include "pairlab/rng.hpp"

using namespace pairlab;

namespace {
Mat jordan(std::uint32_t n, std::int64_t eigen, const Fp& f) {
  Mat j(n, n, f);
  for (std::uint32_t i = 0; i < n; ++i) {
    j.set(i, i, eigen);
    if (i + 1 < n) j.set(i, i + 1, 1);
  }
  return j;
}
}  // namespace

TEST_CASE("product, sum, scale", "[matrix]") {
  Fp f2(2), f3(3), f5(5);
  Mat j2 = jordan(2, 0, f2);
  CHECK((j2 * j2).is_zero());

  Rng rng(1);
  Mat a = rng.matrix(3, 3, f5);
  CHECK(Mat::identity(3, f5) * a == a);
  CHECK(a * Mat::identity(3, f5) == a);

  CHECK(Mat::identity(2, f3).scaled(f3(2)) ==
        Mat::from_rows({{2, 0}, {0, 2}}, f3));
}

TEST_CASE("shape and modulus errors", "[matrix]") {
  Fp f5(5), f7(7);
  Mat a(2, 3, f5), b(2, 3, f5), c(2, 3, f7);
  CHECK_THROWS_AS(a * b, std::invalid_argument);
  CHECK_THROWS_AS(a + c, std::invalid_argument);
  CHECK_THROWS_AS(Mat(2, 2, f5) + Mat(3, 3, f5), std::invalid_argument);
}

TEST_CASE("rref examples", "[matrix]") {
  Fp f5(5);
  RrefResult rr = rref(Mat::from_rows({{1, 2}, {2, 4}}, f5));
  CHECK(rr.rank == 1);
  CHECK(rr.r == Mat::from_rows({{1, 2}, {0, 0}}, f5));
  CHECK(rr.pivot_cols == std::vector<std::uint32_t>{0});

  CHECK(rref(Mat(3, 4, f5)).rank == 0);
  CHECK(rref(Mat::identity(3, Fp(2))).rank == 3);
}

TEST_CASE("kernel basis examples", "[matrix]") {
  Fp f5(5);
  auto basis = kernel_basis(Mat::from_rows({{1, 2}}, f5));
  REQUIRE(basis.size() == 1);
  CHECK(basis[0] == Mat::from_rows({{3}, {1}}, f5));

  Rng rng(2);
  CHECK(kernel_basis(rng.invertible(4, f5)).empty());
  CHECK(kernel_basis(Mat(2, 2, f5)).size() == 2);
}

TEST_CASE("inverse examples", "[matrix]") {
  Fp f7(7), f2(2);
  Mat two_i = Mat::identity(2, f7).scaled(f7(2));
  CHECK(two_i.inverse() == Mat::identity(2, f7).scaled(f7(4)));

  Mat u = Mat::from_rows({{1, 1}, {0, 1}}, f2);
  CHECK(u.inverse() == u);

  CHECK_THROWS_AS(Mat::from_rows({{1, 2}, {2, 4}}, Fp(5)).inverse(),
                  std::domain_error);
}

TEST_CASE("inverse round trip on random invertibles", "[matrix][property]") {
  int done = 0;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    Fp f(p);
    Rng rng(p * 17);
    for (int t = 0; t < 50; ++t) {
      std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(8));
      Mat a = rng.invertible(n, f);
      CHECK(a * a.inverse() == Mat::identity(n, f));
      ++done;
    }
  }
  CHECK(done == 200);
}

TEST_CASE("rank plus kernel dimension equals columns", "[matrix][property]") {
  for (std::uint32_t p : {2u, 5u, 101u}) {
    Fp f(p);
    Rng rng(p + 5);
    for (int t = 0; t < 40; ++t) {
      std::uint32_t r = 1 + static_cast<std::uint32_t>(rng.below(6));
      std::uint32_t c = 1 + static_cast<std::uint32_t>(rng.below(6));
      Mat a = rng.matrix(r, c, f);
      CHECK(rank(a) + kernel_basis(a).size() == c);
      for (const Mat& v : kernel_basis(a)) CHECK((a * v).is_zero());
    }
  }
}

TEST_CASE("packed GF(2) elimination matches the generic path", "[matrix][property]") {
  Fp f2(2);
  Rng rng(7);
  for (int t = 0; t < 60; ++t) {
    std::uint32_t r = 1 + static_cast<std::uint32_t>(rng.below(70));
    std::uint32_t c = 1 + static_cast<std::uint32_t>(rng.below(70));
    Mat a = rng.matrix(r, c, f2);
    RrefResult packed = detail::rref_gf2(a);
    RrefResult generic = detail::rref_generic(a);
    CHECK(packed.r == generic.r);
    CHECK(packed.rank == generic.rank);
    CHECK(packed.pivot_cols == generic.pivot_cols);
  }
}

TEST_CASE("nilpotency with index", "[matrix]") {
  Fp f5(5);
  Mat j3 = jordan(3, 0, f5);
  CHECK(is_nilpotent_with_index(j3, 3));
  CHECK(!is_nilpotent_with_index(j3, 2));
  CHECK(is_nilpotent_with_index(Mat(4, 4, f5), 1));
}

TEST_CASE("block assembly examples", "[block]") {
  Fp f5(5);
  BlockLayout layout = BlockLayout::square({1, 1});
  BlockMap blocks;
  blocks.emplace(BlockIndex{0, 1}, Mat::from_rows({{1}}, f5));
  CHECK(assemble_blocks(layout, blocks, f5) ==
        Mat::from_rows({{0, 1}, {0, 0}}, f5));

  BlockMap bad;
  bad.emplace(BlockIndex{0, 0}, Mat(2, 2, f5));
  CHECK_THROWS_AS(assemble_blocks(layout, bad, f5), std::invalid_argument);
}

TEST_CASE("assemble/extract round trip on random layouts", "[block][property]") {
  Fp f7(7);
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::uint32_t> rs, cs;
    for (int i = 0, k = 2 + static_cast<int>(rng.below(3)); i < k; ++i)
      rs.push_back(static_cast<std::uint32_t>(rng.below(4)));
    for (int j = 0, k = 2 + static_cast<int>(rng.below(3)); j < k; ++j)
      cs.push_back(static_cast<std::uint32_t>(rng.below(4)));
    BlockLayout layout(rs, cs);
    BlockMap blocks;
    for (std::uint32_t i = 0; i < layout.block_rows(); ++i)
      for (std::uint32_t j = 0; j < layout.block_cols(); ++j)
        if (rng.below(2))
          blocks.emplace(BlockIndex{i, j},
                         rng.matrix(layout.row_stripe(i), layout.col_stripe(j), f7));
    Mat big = assemble_blocks(layout, blocks, f7);
    for (std::uint32_t i = 0; i < layout.block_rows(); ++i)
      for (std::uint32_t j = 0; j < layout.block_cols(); ++j) {
        Mat got = extract_block(big, layout, i, j);
        auto it = blocks.find({i, j});
        if (it != blocks.end())
          CHECK(got == it->second);
        else
          CHECK(got.is_zero());
      }
  }
}

TEST_CASE("matrix text format", "[io]") {
  Fp f5(5);
  std::istringstream in("2 2 5\n1 2\n3 4\n");
  Mat m = read_matrix(in);
  CHECK(m == Mat::from_rows({{1, 2}, {3, 4}}, f5));

  std::ostringstream out;
  write_matrix(out, m);
  std::istringstream back(out.str());
  CHECK(read_matrix(back) == m);

  std::istringstream bad_entry("1 1 5\n7\n");
  CHECK_THROWS_AS(read_matrix(bad_entry), ParseError);
  std::istringstream bad_mod("1 1 4\n0\n");
  CHECK_THROWS_AS(read_matrix(bad_mod), ParseError);
  std::istringstream bad_header("2 x\n");
  CHECK_THROWS_AS(read_matrix(bad_header), ParseError);
  std::istringstream truncated("2 2 5\n1 2 3\n");
  CHECK_THROWS_AS(read_matrix(truncated), ParseError);
}

TEST_CASE("matrix text round trip on random matrices", "[io][property]") {
  Rng rng(3);
  for (std::uint32_t p : {2u, 101u}) {
    Fp f(p);
    for (int t = 0; t < 20; ++t) {
      Mat m = rng.matrix(1 + static_cast<std::uint32_t>(rng.below(6)),
                         1 + static_cast<std::uint32_t>(rng.below(6)), f);
      std::ostringstream out;
      write_matrix(out, m);
      std::string first = out.str();
      std::istringstream in(first);
      Mat parsed = read_matrix(in);
      CHECK(parsed == m);
      std::ostringstream again;
      write_matrix(again, parsed);
      CHECK(again.str() == first);
    }
  }
}
