#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace arithdyn {

// Arbitrary-precision integers and rationals. GMP keeps both canonical:
// mpz has no leading zero limbs, mpq is reduced with a positive denominator.
using Integer = mpz_class;
using Rational = mpq_class;

// Nonnegative gcd; gcd(0, 0) = 0.
Integer gcd_int(const Integer& a, const Integer& b);

Integer pow_int(const Integer& base, unsigned long exponent);

// Number of bits of |n| (0 for n = 0).
std::size_t bit_length(const Integer& n);

// Residue of n in [0, p) for a machine modulus.
std::uint64_t mod_u64(const Integer& n, std::uint64_t p);

Integer from_u64(std::uint64_t v);
std::uint64_t to_u64(const Integer& n);  // requires 0 <= n < 2^64

std::string to_string(const Integer& n);
std::string to_string(const Rational& q);

}  // namespace arithdyn
