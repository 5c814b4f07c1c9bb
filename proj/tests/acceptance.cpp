// Acceptance suite: one criterion per function, one pass/fail line each,
// exact arithmetic throughout. Exit code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "pairlab/lemma.hpp"
#include "pairlab/theorem.hpp"

using namespace pairlab;
using namespace testing_oracles;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// 1. The construction lands in N23 for 200 random bases, n in 1..4,
//    p in {2,3,5,7,101}. Exact.
Check criterion_construction_n23() {
  Check c;
  const std::uint32_t primes[] = {2, 3, 5, 7, 101};
  int done = 0;
  for (std::uint32_t p : primes) {
    Fp f(p);
    Rng rng(1000 + p);
    for (int t = 0; t < 40; ++t, ++done) {
      std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(4));
      BasePair base = random_base(rng, n, f);
      P0Pair p0 = build_p0(base);
      c.require(check_n23(p0.pair), "pair left N23 at p=" + std::to_string(p));
      c.require(p0.pair.size() == 13 * n, "size is not 13n");
    }
  }
  c.require(done == 200, "trial count");
  return c;
}

// 2. The reduction chain verifies on 100 random (base, q) with
//    alpha, beta != 0, p in {5,7,101}, n <= 3; includes U U^-1 = I.
Check criterion_lemma_chain() {
  Check c;
  int done = 0;
  for (std::uint32_t p : {5u, 7u, 101u}) {
    Fp f(p);
    Rng rng(2000 + p);
    int per = p == 101 ? 34 : 33;
    for (int t = 0; t < per; ++t, ++done) {
      std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(3));
      BasePair base = random_base(rng, n, f);
      QuadCoeffs q = random_quad(rng, f);
      Lemma1Result res = verify_lemma1(base, q);
      if (!res.ok && c.ok)
        c.require(false, "chain failed at p=" + std::to_string(p) + " q=" + q.str() +
                             (res.trace.violations.empty()
                                  ? ""
                                  : " (" + res.trace.violations.front() + ")"));
    }
  }
  c.require(done == 100, "trial count");
  return c;
}

// 3. Forward lift: 100 random invertible X with base2 the X-conjugate of
//    base1; the lift verifies and polynomial similarity is found with the
//    identity tuple.
Check criterion_forward_lift() {
  Check c;
  const std::uint32_t primes[] = {3, 5, 7};
  for (int t = 0; t < 100; ++t) {
    std::uint32_t p = primes[t % 3];
    Fp f(p);
    Rng rng(trial_seed(3000, t));
    std::uint32_t n = (t % 7 == 0) ? 2 : 1;
    BasePair b1 = random_base(rng, n, f);
    Mat x = rng.invertible(n, f);
    BasePair b2 = conjugated_base(b1, x);
    try {
      Mat lift = lift_similarity(x, b1, b2);
      (void)lift;
    } catch (const std::exception& e) {
      c.require(false, std::string("lift post-verification failed: ") + e.what());
      continue;
    }
    PolySimilarityResult r =
        are_poly_similar(build_p0(b1).pair, build_p0(b2).pair, 64, t);
    c.require(r.similar, "poly-similar not found at trial " + std::to_string(t));
    c.require(r.q && r.q->is_identity(), "witness tuple is not the identity");
  }
  return c;
}

// 4. Negative instance over GF(2), n = 2: bases (J2(1), J2(1)) and
//    (J2(1), I2) are not similar, and polynomial similarity of the
//    constructed 26x26 pairs is refuted, certified, across all 32 tuples.
Check criterion_negative_instance() {
  Check c;
  Fp f2(2);
  Mat j = Mat::from_rows({{1, 1}, {0, 1}}, f2);
  Mat i2 = Mat::identity(2, f2);
  TheoremInstance inst(BasePair(j, j), BasePair(j, i2));
  ConverseReport rep = verify_converse(inst, 64, 0);
  c.require(!rep.base.similar(), "bases unexpectedly similar");
  c.require(rep.base.certified(), "base verdict not certified");
  c.require(!rep.poly.similar, "polynomial similarity unexpectedly found");
  c.require(rep.poly.certified, "negative verdict not certified");
  c.require(rep.poly.tuples_checked == 32, "did not exhaust all 32 tuples");
  c.require(rep.implication_ok, "implication check failed");
  return c;
}

std::vector<ConverseReport> positive_reports;  // shared between 5 and 6

// 5. Fifty positive instances over GF(7), n = 2: polynomial similarity is
//    found, every witness tuple satisfies beta^3 = alpha^2, and the base
//    conjugator is recovered and passes the conjugation check.
Check criterion_positive_instances() {
  Check c;
  Fp f7(7);
  positive_reports.clear();
  for (int t = 0; t < 50; ++t) {
    Rng rng(trial_seed(5000, t));
    BasePair b1(rng.unipotent(2, f7), rng.unipotent(2, f7));
    Mat x = rng.invertible(2, f7);
    BasePair b2 = conjugated_base(b1, x);
    ConverseReport rep = verify_converse(TheoremInstance(b1, b2), 64, t);
    c.require(rep.poly.similar, "instance " + std::to_string(t) + " not found similar");
    if (!rep.poly.similar) continue;
    const QuadCoeffs& q = *rep.poly.q;
    c.require(f7.pow(q.beta, 3) == f7.pow(q.alpha, 2),
              "witness violates beta^3 = alpha^2 at instance " + std::to_string(t));
    c.require(rep.recovered_x.has_value(), "no recovered conjugator");
    if (rep.recovered_x) {
      Mat xi = rep.recovered_x->inverse();
      c.require(xi * b1.m * *rep.recovered_x == b2.m &&
                    xi * b1.n * *rep.recovered_x == b2.n,
                "recovered conjugator fails at instance " + std::to_string(t));
    }
    positive_reports.push_back(std::move(rep));
  }
  c.require(positive_reports.size() == 50, "not all instances completed");
  return c;
}

// 6. Every witness from criterion 5, after normalization, has the two
//    block-triangular shapes, Z21 = 0, Z12 = 0, and satisfies both derived
//    block equations exactly.
Check criterion_block_equations() {
  Check c;
  c.require(!positive_reports.empty(), "criterion 5 produced no witnesses");
  for (std::size_t i = 0; i < positive_reports.size(); ++i) {
    const ConverseReport& rep = positive_reports[i];
    c.require(rep.trace.has_value(), "missing trace at instance " + std::to_string(i));
    if (!rep.trace) continue;
    const ProofTrace& tr = *rep.trace;
    c.require(tr.shape_a_ok, "outer shape violated at instance " + std::to_string(i));
    c.require(tr.shape_b_ok, "inner shape violated at instance " + std::to_string(i));
    c.require(tr.z21_zero, "Z21 != 0 at instance " + std::to_string(i));
    c.require(tr.z12_zero, "Z12 != 0 at instance " + std::to_string(i));
    c.require(tr.eq6_ok, "W Y22 = Y44 W fails at instance " + std::to_string(i));
    c.require(tr.eq7_ok,
              "beta^3 T1 Y22 = alpha^2 Y22 T2 fails at instance " + std::to_string(i));
  }
  return c;
}

// 7. The similarity engine agrees with brute force over all 168 elements of
//    GL(3, GF(2)) on 100 random pairs of 3x3 pairs.
Check criterion_similarity_oracle() {
  Check c;
  Fp f2(2);
  std::vector<Mat> gl = enumerate_gl(3, f2);
  c.require(gl.size() == 168, "GL(3,2) should have 168 elements");
  Rng rng(7000);
  for (int t = 0; t < 100; ++t) {
    MatPair p1(rng.matrix(3, 3, f2), rng.matrix(3, 3, f2));
    MatPair p2 = (t % 2 == 0)
                     ? conjugate_pair(p1, gl[rng.below(gl.size())])
                     : MatPair(rng.matrix(3, 3, f2), rng.matrix(3, 3, f2));
    bool expected = brute_force_similar(p1, p2, gl);
    SimilarityVerdict got = are_similar_pairs(p1, p2, 64, t);
    c.require(got.certified(), "verdict not certified at trial " + std::to_string(t));
    c.require(got.similar() == expected,
              "oracle disagreement at trial " + std::to_string(t));
  }
  return c;
}

// 8. The unitriangular construction tracks base similarity in both
//    directions over GF(2), n = 2: three similar-base and three
//    non-similar-base instances, certified.
Check criterion_e1_wildness() {
  Check c;
  Fp f2(2);
  Mat j = Mat::from_rows({{1, 1}, {0, 1}}, f2);
  Mat i2 = Mat::identity(2, f2);

  Rng rng(8000);
  for (int t = 0; t < 3; ++t) {
    BasePair b1(rng.unipotent(2, f2), rng.unipotent(2, f2));
    BasePair b2 = conjugated_base(b1, rng.invertible(2, f2));
    E1WildnessReport rep = verify_e1_wildness(b1, b2, 256, t);
    c.require(rep.base.similar(), "similar instance setup broken");
    c.require(rep.constructed.similar() && rep.iff_ok,
              "similar-base instance " + std::to_string(t) + " failed");
  }

  const std::pair<BasePair, BasePair> negatives[] = {
      {BasePair(j, j), BasePair(j, i2)},
      {BasePair(j, i2), BasePair(i2, j)},
      {BasePair(i2, i2), BasePair(j, j)}};
  int idx = 0;
  for (const auto& [b1, b2] : negatives) {
    E1WildnessReport rep = verify_e1_wildness(b1, b2, 256, idx);
    c.require(!rep.base.similar() && rep.base.certified(),
              "negative base setup broken at " + std::to_string(idx));
    c.require(!rep.constructed.similar() && rep.constructed.certified(),
              "constructed pairs not refuted at " + std::to_string(idx));
    c.require(rep.iff_ok, "iff violated at " + std::to_string(idx));
    ++idx;
  }
  return c;
}

// 9. Polynomial evaluation agrees with the naive monomial-expansion oracle
//    on 200 random commuting pairs and polynomials of total degree <= 4.
Check criterion_eval_oracle() {
  Check c;
  int done = 0;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    Fp f(p);
    Rng rng(9000 + p);
    for (int t = 0; t < 50; ++t, ++done) {
      std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(5));
      MatPair pair = random_commuting_pair(rng, n, f);
      BivarPoly poly = random_poly(rng, f, 4);
      if (eval_poly_pair(poly, pair) != naive_poly_eval(poly, pair))
        c.require(false, "mismatch at p=" + std::to_string(p) + " trial " +
                             std::to_string(t));
    }
  }
  c.require(done == 200, "trial count");
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    std::function<Check()> run;
  };
  const Criterion criteria[] = {
      {1, "construction stays in N23 (200 bases, p in {2,3,5,7,101}, n<=4)",
       criterion_construction_n23},
      {2, "reduction chain incl. U*U^-1=I (100 runs, p in {5,7,101}, n<=3)",
       criterion_lemma_chain},
      {3, "forward lift + identity-tuple poly-similarity (100 conjugate bases)",
       criterion_forward_lift},
      {4, "negative instance certified over GF(2), n=2, all 32 tuples",
       criterion_negative_instance},
      {5, "50 positive instances over GF(7): witnesses obey beta^3=alpha^2, "
          "conjugator recovered",
       criterion_positive_instances},
      {6, "block shapes, Z21=Z12=0 and both block equations on every witness",
       criterion_block_equations},
      {7, "similarity engine agrees with GL(3,2) brute force (100 pairs)",
       criterion_similarity_oracle},
      {8, "unitriangular pairs track base similarity both ways (GF(2), n=2)",
       criterion_e1_wildness},
      {9, "polynomial evaluation matches the naive oracle (200 pairs)",
       criterion_eval_oracle},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d. %s (%lld ms)%s%s\n", result.ok ? "PASS" : "FAIL", cr.id,
                cr.label, static_cast<long long>(ms), result.ok ? "" : " -- ",
                result.ok ? "" : result.detail.c_str());
    std::fflush(stdout);
    if (!result.ok) ++failures;
  }
  if (failures == 0)
    std::printf("all %zu criteria passed\n", std::size(criteria));
  else
    std::printf("%d criteria FAILED\n", failures);
  return failures;
}
