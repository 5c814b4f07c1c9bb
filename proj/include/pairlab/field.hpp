#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pairlab {

/// Deterministic primality check by trial division. Intended for moduli
/// small enough that field elements fit comfortably in 32 bits.
inline bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::uint32_t d = 3; static_cast<std::uint64_t>(d) * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

struct Fe;

/// Prime-field context GF(p). Carries the modulus plus a Barrett constant so
/// reductions in hot loops avoid hardware division.
class Fp {
 public:
  explicit Fp(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) {
      throw std::invalid_argument("Fp: modulus " + std::to_string(p) +
                                  " is not prime");
    }
    if (p >= (1u << 31)) {
      throw std::invalid_argument("Fp: modulus must be below 2^31");
    }
    barrett_ = ~std::uint64_t{0} / p;
  }

  std::uint32_t modulus() const noexcept { return p_; }

  /// x mod p for any 64-bit x (Barrett reduction, branch-corrected).
  std::uint32_t reduce(std::uint64_t x) const noexcept {
    std::uint64_t q =
        static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * barrett_) >> 64);
    std::uint64_t r = x - q * p_;
    while (r >= p_) r -= p_;
    return static_cast<std::uint32_t>(r);
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return reduce(static_cast<std::uint64_t>(a) * b);
  }

  /// Multiplicative inverse by extended Euclid. Exact and deterministic.
  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("Fp::inv: division by zero");
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p_, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    // r is gcd(a, p) = 1 since p is prime and 0 < a < p
    if (t < 0) t += p_;
    return static_cast<std::uint32_t>(t);
  }

  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept {
    std::uint64_t base = a % p_, acc = 1 % p_;
    while (e != 0) {
      if (e & 1) acc = reduce(acc * base);
      base = reduce(base * base);
      e >>= 1;
    }
    return static_cast<std::uint32_t>(acc);
  }

  /// Canonical residue of a possibly negative integer.
  std::uint32_t canon(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint32_t>(r);
  }

  Fe operator()(std::int64_t v) const;

  bool operator==(const Fp& o) const noexcept { return p_ == o.p_; }
  bool operator!=(const Fp& o) const noexcept { return p_ != o.p_; }

 private:
  std::uint32_t p_;
  std::uint64_t barrett_;
};

/// A single residue together with its modulus. Mixing moduli is an error,
/// reported on every binary operation.
struct Fe {
  std::uint32_t value = 0;
  std::uint32_t modulus = 2;

  Fe() = default;
  Fe(std::uint32_t v, std::uint32_t p) : value(v), modulus(p) {
    if (v >= p) throw std::invalid_argument("Fe: value not reduced");
  }

  bool is_zero() const noexcept { return value == 0; }

  friend Fe operator+(Fe a, Fe b) {
    check_same(a, b);
    std::uint32_t s = a.value + b.value;
    return Fe(s >= a.modulus ? s - a.modulus : s, a.modulus);
  }
  friend Fe operator-(Fe a, Fe b) {
    check_same(a, b);
    return Fe(a.value >= b.value ? a.value - b.value
                                 : a.value + a.modulus - b.value,
              a.modulus);
  }
  friend Fe operator*(Fe a, Fe b) {
    check_same(a, b);
    return Fe(static_cast<std::uint32_t>(
                  static_cast<std::uint64_t>(a.value) * b.value % a.modulus),
              a.modulus);
  }
  Fe operator-() const { return Fe(value == 0 ? 0 : modulus - value, modulus); }

  Fe inv() const {
    Fp f(modulus);
    return Fe(f.inv(value), modulus);
  }
  friend Fe operator/(Fe a, Fe b) { return a * b.inv(); }

  friend bool operator==(Fe a, Fe b) {
    return a.value == b.value && a.modulus == b.modulus;
  }
  friend bool operator!=(Fe a, Fe b) { return !(a == b); }

 private:
  static void check_same(Fe a, Fe b) {
    if (a.modulus != b.modulus) {
      throw std::invalid_argument("Fe: modulus mismatch (" +
                                  std::to_string(a.modulus) + " vs " +
                                  std::to_string(b.modulus) + ")");
    }
  }
};

inline Fe Fp::operator()(std::int64_t v) const { return Fe(canon(v), p_); }

}  // namespace pairlab
