#include "nullity/prime_field.hpp"

#include <stdexcept>

namespace nullity {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) result = mulmod(result, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are exact for every n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t prime_below(std::uint64_t bound) {
  if (bound <= 2) throw std::invalid_argument("no prime below 2");
  for (std::uint64_t c = bound - 1; c >= 2; --c) {
    if (is_prime(c)) return c;
  }
  throw std::logic_error("unreachable");
}

std::vector<std::uint64_t> default_primes(std::size_t count) {
  std::vector<std::uint64_t> primes;
  std::uint64_t p = (1ULL << 61) - 1;
  for (std::size_t i = 0; i < count; ++i) {
    primes.push_back(p);
    p = prime_below(p);
  }
  return primes;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 3 || p >= (1ULL << 61) || !is_prime(p)) {
    throw std::invalid_argument("field modulus must be an odd prime below 2^61");
  }
  // Newton iteration for p^{-1} mod 2^64; p * p == 1 mod 8 seeds 3 bits.
  std::uint64_t inv = p;
  for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
  neg_inv_ = ~inv + 1;
  r_ = static_cast<std::uint64_t>((static_cast<u128>(1) << 64) % p);
  r2_ = mulmod(r_, r_, p);
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t result = one();
  while (e > 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero in a prime field");
  return pow(a, p_ - 2);
}

}  // namespace nullity
