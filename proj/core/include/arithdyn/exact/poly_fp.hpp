#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/exact/modarith.hpp"
#include "arithdyn/exact/poly_z.hpp"

namespace arithdyn {

// Dense polynomial over F_p with ascending coefficients in [0, p).
class PolyFp {
 public:
  explicit PolyFp(std::uint64_t p) : field_(p) {}
  PolyFp(std::uint64_t p, std::vector<std::uint64_t> coeffs);
  // Coefficientwise reduction of an integer polynomial.
  static PolyFp from_z(std::uint64_t p, const PolyZ& f);

  static PolyFp x(std::uint64_t p) { return PolyFp(p, {0, 1}); }

  const ModP& field() const noexcept { return field_; }
  std::uint64_t modulus() const noexcept { return field_.modulus(); }
  bool is_zero() const noexcept { return c_.empty(); }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<std::uint64_t>& coeffs() const noexcept { return c_; }
  std::uint64_t coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0; }
  std::uint64_t lead() const { return c_.empty() ? 0 : c_.back(); }

  PolyFp monic() const;
  PolyFp derivative() const;
  std::uint64_t eval(std::uint64_t x) const;

  PolyFp& operator+=(const PolyFp& o);
  PolyFp& operator-=(const PolyFp& o);
  friend PolyFp operator+(PolyFp a, const PolyFp& b) { return a += b; }
  friend PolyFp operator-(PolyFp a, const PolyFp& b) { return a -= b; }
  friend PolyFp operator*(const PolyFp& a, const PolyFp& b);
  friend bool operator==(const PolyFp& a, const PolyFp& b) {
    return a.modulus() == b.modulus() && a.c_ == b.c_;
  }

  std::string to_string(char var = 'x') const;

 private:
  friend std::pair<PolyFp, PolyFp> divmod(const PolyFp& a, const PolyFp& b);
  friend PolyFp mulmod(const PolyFp& a, const PolyFp& b, const PolyFp& f);
  void trim();
  ModP field_;
  std::vector<std::uint64_t> c_;
};

// Quotient and remainder; throws on division by zero.
std::pair<PolyFp, PolyFp> divmod(const PolyFp& a, const PolyFp& b);
PolyFp operator%(const PolyFp& a, const PolyFp& b);
PolyFp mulmod(const PolyFp& a, const PolyFp& b, const PolyFp& f);
// base^e mod f by repeated squaring; e is arbitrary precision.
PolyFp powmod(const PolyFp& base, const Integer& e, const PolyFp& f);
// Monic gcd (zero if both are zero).
PolyFp gcd(PolyFp a, PolyFp b);

// x^p mod f. Rejects constant or zero f.
PolyFp poly_mod_pow_x(std::uint64_t p, const PolyFp& f);

// Number of distinct roots in F_p: deg gcd(x^p - x mod f, f).
int distinct_root_count(const PolyFp& f);

// The distinct roots in F_p, ascending, via Cantor-Zassenhaus splitting.
std::vector<std::uint64_t> roots(const PolyFp& f);

// Distinct-degree factorization of a squarefree f: (d, product of the
// monic irreducible factors of degree d), for every d with a factor.
std::vector<std::pair<int, PolyFp>> distinct_degree_factorization(const PolyFp& f);

bool is_squarefree(const PolyFp& f);

}  // namespace arithdyn
