#include "arithdyn/exact/primes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace arithdyn {
namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

// One Miller-Rabin round: n - 1 = d * 2^s with d odd.
bool mr_round(std::uint64_t n, std::uint64_t d, int s, std::uint64_t a) {
  a %= n;
  if (a == 0) return true;
  std::uint64_t x = powmod64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

constexpr std::array<std::uint32_t, 12> kSmallPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

std::vector<std::uint32_t> simple_sieve(std::uint32_t limit) {
  std::vector<std::uint8_t> composite(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

}  // namespace

std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint32_t p : kSmallPrimes) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // The first twelve primes as witnesses are deterministic below 3.3e24.
  for (std::uint32_t a : kSmallPrimes) {
    if (!mr_round(n, d, s, a)) return false;
  }
  return true;
}

bool is_prime(const Integer& n) {
  if (sgn(n) < 0) return false;
  if (bit_length(n) <= 64) return is_prime(to_u64(n));
  for (std::uint32_t p : kSmallPrimes) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  Integer n_minus_1 = n - 1;
  Integer d = n_minus_1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(0x5eed5eedUL);
  Integer range = n - 3;
  for (int round = 0; round < 64; ++round) {
    Integer a = rng.get_z_range(range) + 2;
    Integer x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1) continue;
    bool witness = true;
    for (unsigned long r = 1; r < s; ++r) {
      mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

SegmentedSieve::SegmentedSieve(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_span)
    : lo_(lo), hi_(std::max(lo, hi)), cursor_(lo), span_(std::max<std::uint64_t>(segment_span, 64)) {
  if (hi_ > 2) {
    std::uint64_t root = isqrt_u64(hi_ - 1);
    base_primes_ = simple_sieve(static_cast<std::uint32_t>(root));
  }
}

bool SegmentedSieve::next_segment(std::vector<std::uint64_t>& out) {
  if (cursor_ >= hi_) return false;
  const std::uint64_t start = cursor_;
  const std::uint64_t end = (hi_ - start > span_) ? start + span_ : hi_;
  cursor_ = end;

  if (start <= 2 && 2 < end) out.push_back(2);
  const std::uint64_t first_odd = std::max<std::uint64_t>(start | 1, 3);
  if (first_odd >= end) return true;
  const std::uint64_t count = (end - first_odd + 1) / 2;
  marks_.assign(count, 0);

  for (std::uint32_t q32 : base_primes_) {
    const std::uint64_t q = q32;
    if (q == 2) continue;
    if (q * q >= end) break;
    std::uint64_t first = (first_odd + q - 1) / q * q;
    if ((first & 1) == 0) first += q;
    first = std::max(first, q * q);
    for (std::uint64_t j = first; j < end; j += 2 * q) marks_[(j - first_odd) >> 1] = 1;
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!marks_[i]) out.push_back(first_odd + 2 * i);
  }
  return true;
}

std::vector<std::uint64_t> prime_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  SegmentedSieve sieve(lo, hi);
  while (sieve.next_segment(out)) {
  }
  return out;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& fn) {
  SegmentedSieve sieve(lo, hi);
  std::vector<std::uint64_t> buffer;
  while (true) {
    buffer.clear();
    if (!sieve.next_segment(buffer)) break;
    for (std::uint64_t p : buffer) fn(p);
  }
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

std::uint64_t rho(std::uint64_t n, std::uint64_t c) {
  auto f = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
  std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
  const std::uint64_t m = 128;
  for (std::uint64_t r = 1; g == 1; r <<= 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    for (std::uint64_t k = 0; k < r && g == 1; k += m) {
      ys = y;
      for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = mulmod_u64(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
    }
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void split(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t d = rho(n, c);
    if (d != n) {
      split(d, out);
      split(n / d, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
    while (n > 1 && n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  split(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

}  // namespace arithdyn
