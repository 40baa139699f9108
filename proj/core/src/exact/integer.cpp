#include "arithdyn/exact/integer.hpp"

#include <stdexcept>

namespace arithdyn {

Integer gcd_int(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer pow_int(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

std::size_t bit_length(const Integer& n) {
  if (sgn(n) == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

std::uint64_t mod_u64(const Integer& n, std::uint64_t p) {
  Integer m(from_u64(p));
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return to_u64(r);
}

Integer from_u64(std::uint64_t v) {
  Integer r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

std::uint64_t to_u64(const Integer& n) {
  if (sgn(n) < 0 || bit_length(n) > 64) throw std::out_of_range("to_u64: value out of range");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, n.get_mpz_t());
  return v;
}

std::string to_string(const Integer& n) { return n.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace arithdyn
