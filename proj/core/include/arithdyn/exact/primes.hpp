#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "arithdyn/exact/integer.hpp"

namespace arithdyn {

// Deterministic Miller-Rabin for all 64-bit n (fixed witness set).
bool is_prime(std::uint64_t n);

// Deterministic below 2^64; above, 64 Miller-Rabin rounds with pseudo-random
// bases from a fixed seed, so the error bound is 4^-64 = 2^-128.
bool is_prime(const Integer& n);

// All primes in [lo, hi), ascending.
std::vector<std::uint64_t> prime_range(std::uint64_t lo, std::uint64_t hi);

// Segmented odd-only sieve of Eratosthenes over [lo, hi). Primes are produced
// one segment at a time so arbitrarily long ranges run in bounded memory.
class SegmentedSieve {
 public:
  SegmentedSieve(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_span = std::uint64_t{1} << 21);

  // Appends the next segment's primes to `out`. Returns false once exhausted.
  bool next_segment(std::vector<std::uint64_t>& out);

 private:
  std::uint64_t lo_;
  std::uint64_t hi_;
  std::uint64_t cursor_;
  std::uint64_t span_;
  std::vector<std::uint32_t> base_primes_;
  std::vector<std::uint8_t> marks_;
};

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& fn);

std::uint64_t isqrt_u64(std::uint64_t n);

// Prime factorization (Pollard-Brent rho), ascending primes with exponents.
std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n);

}  // namespace arithdyn
