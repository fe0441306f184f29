#pragma once

#include <cstdint>
#include <vector>

namespace nullity {

__extension__ using u128 = unsigned __int128;

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n);

/// Largest prime strictly below `bound`.
std::uint64_t prime_below(std::uint64_t bound);

/// 2^61 - 1 followed by the next primes below it.
std::vector<std::uint64_t> default_primes(std::size_t count = 3);

/// GF(p) for an odd prime p < 2^61 in Montgomery form (R = 2^64). The bound
/// leaves room to add up to 2^66 / p products lazily before reducing.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }

  std::uint64_t to_mont(std::uint64_t a) const { return mul(a % p_, r2_); }
  std::uint64_t from_mont(std::uint64_t a) const { return reduce(a); }
  std::uint64_t zero() const { return 0; }
  std::uint64_t one() const { return r_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return reduce(static_cast<u128>(a) * b);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  /// Throws std::domain_error for 0.
  std::uint64_t inv(std::uint64_t a) const;

  /// Montgomery reduction, t < p * 2^64: returns t / 2^64 mod p.
  std::uint64_t reduce(u128 t) const {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * neg_inv_;
    const u128 sum = (t >> 64) + ((static_cast<u128>(m) * p_ + static_cast<std::uint64_t>(t)) >> 64);
    const std::uint64_t s = static_cast<std::uint64_t>(sum);
    return s >= p_ ? s - p_ : s;
  }

 private:
  std::uint64_t p_;
  std::uint64_t neg_inv_;  ///< -p^{-1} mod 2^64
  std::uint64_t r_;        ///< 2^64 mod p
  std::uint64_t r2_;       ///< 2^128 mod p
};

}  // namespace nullity
