#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "arithdyn/exact/integer.hpp"
#include "arithdyn/exact/poly_fp.hpp"
#include "arithdyn/exact/poly_z.hpp"
#include "arithdyn/projmap/point.hpp"

namespace arithdyn {

// Default ceiling on the degree of composites and iterates.
inline constexpr int kIterateDegreeCap = 4096;

// A binary form of formal degree d stored as its dehomogenization F(x, 1).
// The coefficient of x^i is the coefficient of X^i Y^(d-i).
struct BinaryForm {
  PolyZ poly;
  int degree = 0;

  Integer coeff(int i) const { return poly.coeff(i); }
  Integer eval(const Integer& X, const Integer& Y) const;
  std::uint64_t eval(std::uint64_t X, std::uint64_t Y, const ModP& f) const;
  BinaryForm d_dx() const;
  BinaryForm d_dy() const;
  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
    return {a.poly * b.poly, a.degree + b.degree};
  }
  friend BinaryForm operator-(const BinaryForm& a, const BinaryForm& b);
  friend bool operator==(const BinaryForm&, const BinaryForm&) = default;
};

// Res_{d,d}(F, G) for two forms of the same formal degree d.
Integer homogeneous_resultant(const BinaryForm& F, const BinaryForm& G);

// phi = [F : G] with F, G coprime forms of degree d >= 2 over Z. The pair is
// scaled so its coefficients have content 1 and the first nonzero entry of
// (F_d, ..., F_0, G_d, ..., G_0) is positive.
class RationalMap {
 public:
  // Dehomogenized numerator and denominator; d = max(deg f, deg g).
  // Throws MathError(kInvalidArgument) if d < 2 or F, G share a factor.
  RationalMap(PolyZ f, PolyZ g);

  // Skips the coprimality check. For composites of valid maps.
  static RationalMap trusted(PolyZ f, PolyZ g, int d);

  int degree() const noexcept { return d_; }
  BinaryForm F() const { return {f_, d_}; }
  BinaryForm G() const { return {g_, d_}; }
  const PolyZ& num() const noexcept { return f_; }
  const PolyZ& den() const noexcept { return g_; }

  // Res(F, G), computed once on first use.
  const Integer& resultant() const;

  // "f : g" in the variable x; parse also accepts a bare polynomial
  // (denominator 1) and optional surrounding brackets.
  static RationalMap parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const RationalMap& a, const RationalMap& b) {
    return a.d_ == b.d_ && a.f_ == b.f_ && a.g_ == b.g_;
  }

 private:
  struct Lazy {
    std::once_flag once;
    Integer value;
  };
  RationalMap(PolyZ f, PolyZ g, int d);
  void normalize();

  PolyZ f_;
  PolyZ g_;
  int d_ = 0;
  std::shared_ptr<Lazy> res_;
};

// The reduction [F_p : G_p] of a map with good reduction at p.
class ReducedMap {
 public:
  std::uint64_t modulus() const noexcept { return f_.modulus(); }
  int degree() const noexcept { return d_; }
  const PolyFp& num() const noexcept { return f_; }
  const PolyFp& den() const noexcept { return g_; }
  const ModP& field() const noexcept { return f_.field(); }

 private:
  friend ReducedMap reduce_map(const RationalMap& map, std::uint64_t p);
  ReducedMap(PolyFp f, PolyFp g, int d) : f_(std::move(f)), g_(std::move(g)), d_(d) {}
  PolyFp f_;
  PolyFp g_;
  int d_;
};

// p does not divide Res(F, G). Decided modulo p without the integer resultant:
// the reductions must keep degree d in one coordinate and stay coprime.
bool good_reduction(const RationalMap& map, std::uint64_t p);

// Throws MathError(kBadReduction) when p is a prime of bad reduction.
ReducedMap reduce_map(const RationalMap& map, std::uint64_t p);

// f o g. Throws MathError(kDegreeCapExceeded) if deg f * deg g > cap.
RationalMap compose(const RationalMap& f, const RationalMap& g, int cap = kIterateDegreeCap);

// phi^m for m >= 1. Throws MathError(kDegreeCapExceeded) if d^m > cap.
RationalMap iterate(const RationalMap& map, int m, int cap = kIterateDegreeCap);

ProjPoint apply(const RationalMap& map, const ProjPoint& pt);
ProjPointModP apply(const ReducedMap& map, const ProjPointModP& pt);

// F_X G_Y - F_Y G_X, a form of degree 2d - 2.
BinaryForm wronskian(const RationalMap& map);

// Points of P^1(F_p) where the reduced Wronskian vanishes, ascending with
// infinity last. Throws MathError(kCharTooSmall) unless p > 2d.
std::vector<ProjPointModP> critical_points_modp(const ReducedMap& map);

// Same, for callers that keep the integer map around.
std::vector<ProjPointModP> critical_points_modp(const RationalMap& map, std::uint64_t p);

}  // namespace arithdyn
