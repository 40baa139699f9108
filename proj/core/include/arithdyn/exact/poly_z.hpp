#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "arithdyn/exact/integer.hpp"

namespace arithdyn {

// Hard ceiling on stored polynomial degree.
inline constexpr int kPolyDegreeCap = 1 << 16;

// Dense univariate polynomial over Z, coefficients in ascending degree.
// The highest stored coefficient is nonzero; the zero polynomial is empty.
class PolyZ {
 public:
  PolyZ() = default;
  explicit PolyZ(std::vector<Integer> coeffs);
  explicit PolyZ(std::initializer_list<long> coeffs);

  static PolyZ constant(const Integer& c);
  static PolyZ monomial(const Integer& c, int k);
  static PolyZ x() { return monomial(Integer(1), 1); }

  bool is_zero() const noexcept { return c_.empty(); }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Integer>& coeffs() const noexcept { return c_; }
  // Coefficient of x^i; zero past the degree.
  Integer coeff(int i) const;
  const Integer& lead() const;

  Integer content() const;
  PolyZ primitive_part() const;
  PolyZ derivative() const;
  Integer eval(const Integer& x) const;
  // Exact division of every coefficient by c.
  PolyZ divexact(const Integer& c) const;

  PolyZ operator-() const;
  PolyZ& operator+=(const PolyZ& o);
  PolyZ& operator-=(const PolyZ& o);
  PolyZ& operator*=(const Integer& c);

  friend PolyZ operator+(PolyZ a, const PolyZ& b) { return a += b; }
  friend PolyZ operator-(PolyZ a, const PolyZ& b) { return a -= b; }
  friend PolyZ operator*(PolyZ a, const Integer& c) { return a *= c; }
  friend PolyZ operator*(const Integer& c, PolyZ a) { return a *= c; }
  friend PolyZ operator*(const PolyZ& a, const PolyZ& b);
  friend bool operator==(const PolyZ& a, const PolyZ& b) { return a.c_ == b.c_; }

  std::string to_string(char var = 'x') const;

 private:
  void trim();
  std::vector<Integer> c_;
};

PolyZ pow(const PolyZ& base, unsigned exponent);

// lc(b)^(deg a - deg b + 1) * a mod b, computed without fractions.
PolyZ pseudo_remainder(const PolyZ& a, const PolyZ& b);

// Resultant by the subresultant polynomial remainder sequence.
Integer resultant(const PolyZ& f, const PolyZ& g);

// (-1)^(n(n-1)/2) Res(f, f') / lc(f); the discriminant of a constant is 1.
Integer discriminant(const PolyZ& f);

}  // namespace arithdyn
