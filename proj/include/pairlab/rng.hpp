#pragma once

#include <cstdint>
#include <random>

#include "pairlab/matrix.hpp"

namespace pairlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Derive an independent stream seed for one trial of a batch. Used so
/// parallel trials are reproducible regardless of scheduling.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index + 1));
}

/// Seeded deterministic RNG. Draws go through rejection sampling rather
/// than std::uniform_int_distribution so streams do not depend on the
/// standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x > limit);
    return x % bound;
  }

  Fe field_elem(const Fp& f) {
    return Fe(static_cast<std::uint32_t>(below(f.modulus())), f.modulus());
  }
  Fe nonzero_field_elem(const Fp& f) {
    return Fe(static_cast<std::uint32_t>(1 + below(f.modulus() - 1)), f.modulus());
  }

  Mat matrix(std::uint32_t rows, std::uint32_t cols, const Fp& f) {
    Mat m(rows, cols, f);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j)
        m.set_raw(i, j, static_cast<std::uint32_t>(below(f.modulus())));
    return m;
  }

  Mat invertible(std::uint32_t n, const Fp& f) {
    for (;;) {
      Mat m = matrix(n, n, f);
      if (is_invertible(m)) return m;
    }
  }

  /// Unipotent matrix: a random strictly-upper-triangular perturbation of I,
  /// conjugated by a random invertible so the result is not triangular.
  Mat unipotent(std::uint32_t n, const Fp& f) {
    Mat m = Mat::identity(n, f);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        m.set_raw(i, j, static_cast<std::uint32_t>(below(f.modulus())));
    Mat x = invertible(n, f);
    return x.inverse() * m * x;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pairlab
