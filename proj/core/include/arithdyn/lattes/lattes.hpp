#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arithdyn/density.hpp"
#include "arithdyn/error.hpp"
#include "arithdyn/exact/modarith.hpp"
#include "arithdyn/exact/poly_z.hpp"
#include "arithdyn/projmap/rational_map.hpp"

namespace arithdyn {

// y^2 = x^3 + a x + b over Q.
class EllipticCurve {
 public:
  // Throws MathError(kInvalidArgument) when singular.
  EllipticCurve(Integer a, Integer b);

  const Integer& a() const noexcept { return a_; }
  const Integer& b() const noexcept { return b_; }
  // -16 (4a^3 + 27b^2)
  Integer discriminant() const;
  // x^3 + a x + b
  PolyZ rhs() const;
  Rational rhs(const Rational& x) const;
  bool good_reduction(std::uint64_t p) const;

  // "a b"
  static EllipticCurve parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const EllipticCurve&, const EllipticCurve&) = default;

 private:
  Integer a_;
  Integer b_;
};

class ECPoint {
 public:
  ECPoint() = default;  // the point at infinity
  static ECPoint infinity() { return {}; }
  // Unchecked; see on_curve.
  static ECPoint affine(Rational x, Rational y);

  bool is_infinity() const noexcept { return inf_; }
  const Rational& x() const noexcept { return x_; }
  const Rational& y() const noexcept { return y_; }
  ProjPoint x_coordinate() const;

  // "x y" with rational coordinates, or "inf". Throws ParseError.
  static ECPoint parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const ECPoint&, const ECPoint&) = default;

 private:
  bool inf_ = true;
  Rational x_;
  Rational y_;
};

bool on_curve(const EllipticCurve& E, const ECPoint& P);
// As on_curve, throwing MathError(kInvalidArgument) on failure.
void require_on_curve(const EllipticCurve& E, const ECPoint& P);

ECPoint ec_neg(const ECPoint& P);
ECPoint ec_add(const EllipticCurve& E, const ECPoint& P, const ECPoint& Q);
ECPoint ec_mul(const EllipticCurve& E, const Integer& n, const ECPoint& P);

// Reduction of E at a good prime p.
struct CurveModP {
  ModP field;
  std::uint64_t a;
  std::uint64_t b;

  // Throws MathError(kBadReduction) when p | 2 disc(E).
  static CurveModP reduce(const EllipticCurve& E, std::uint64_t p);
  std::uint64_t modulus() const noexcept { return field.modulus(); }
  std::uint64_t rhs(std::uint64_t x) const;
};

struct ECPointModP {
  bool inf = true;
  std::uint64_t x = 0;
  std::uint64_t y = 0;

  static ECPointModP infinity() { return {}; }
  static ECPointModP affine(std::uint64_t x, std::uint64_t y) { return {false, x, y}; }
  std::string to_string() const;

  friend bool operator==(const ECPointModP&, const ECPointModP&) = default;
};

bool p_integral(const ECPoint& P, std::uint64_t p);
// Points whose coordinates are not p-integral reduce to infinity.
ECPointModP reduce_point(const ECPoint& P, std::uint64_t p);
bool on_curve(const CurveModP& E, const ECPointModP& P);
ECPointModP ec_neg(const CurveModP& E, const ECPointModP& P);
ECPointModP ec_add(const CurveModP& E, const ECPointModP& P, const ECPointModP& Q);
ECPointModP ec_mul(const CurveModP& E, std::uint64_t n, const ECPointModP& P);

// Square root modulo an odd prime (Tonelli-Shanks); nullopt for non-residues.
std::optional<std::uint64_t> sqrt_modp(std::uint64_t a, const ModP& f);

// f_0..f_n where psi_n = f_n for odd n and psi_n = 2y f_n for even n.
std::vector<PolyZ> division_polynomials(const EllipticCurve& E, int n);

inline constexpr unsigned kLattesSupportedQ[] = {2, 3, 5, 7};

struct LattesMap {
  EllipticCurve curve;
  unsigned q;
  RationalMap map;  // x o [q] = map o x
};

// Throws MathError(kUnsupportedQ) unless q is 2, 3, 5 or 7.
LattesMap lattes_map(const EllipticCurve& E, unsigned q);

struct SemiconjugacyWitness {
  std::string field;  // "Q", "F_p" or "symbolic"
  std::string point;
  std::string expected;  // x([q]P)
  std::string actual;    // map(x(P))
};

struct SemiconjugacyReport {
  bool holds = true;
  std::size_t rational_points = 0;
  std::size_t modp_points = 0;
  bool symbolic_checked = false;  // only for q = 2, 3
  std::optional<SemiconjugacyWitness> witness;
};

// Checks x([q]P) = map(x(P)) on `trials` points: rational points of small
// height and their multiples first, then points over random primes. For
// q = 2, 3 also compares the map against the group law in the function
// field of E.
SemiconjugacyReport verify_semiconjugacy(const LattesMap& lm, std::size_t trials, std::uint64_t seed = 1);

// Group-law identity x([q]P) = lattes_map(E, q)(x(P)) with a, b
// indeterminates, for q = 2, 3. Throws kUnsupportedQ otherwise.
bool lattes_identity_generic(unsigned q);

// Exact order of Q mod p. Throws MathError(kBadReduction) if p | 2 disc(E)
// or Q is not p-integral.
std::uint64_t point_order_modp(const EllipticCurve& E, const ECPoint& Q, std::uint64_t p);

inline constexpr int kTorsionSearchBound = 16;

// Smallest m <= kTorsionSearchBound with [m]Q = infinity.
std::optional<int> small_torsion_order(const EllipticCurve& E, const ECPoint& Q);

enum class TorsionPolicy { kReject, kAnnotate };

struct OrderSweepOptions {
  unsigned workers = 0;
  TorsionPolicy torsion = TorsionPolicy::kReject;
  bool cross_check = true;
};

struct OrderSweepPrime {
  std::uint64_t p;
  std::uint64_t order;
  bool divisible;
};

struct OrderSweepResult {
  DensityEstimate density;
  std::vector<OrderSweepPrime> primes;
  std::optional<int> torsion_order;
  // Cross-check against the derangement sweep of (map, x([q^(n-1)]Q)) at
  // level 1. Absent when disabled, n = 0, or [q^(n-1)]Q is infinity.
  std::optional<std::string> cross_check_system;
  std::size_t cross_check_primes = 0;
  std::size_t cross_check_derangements = 0;
  std::vector<std::uint64_t> cross_check_violations;
  bool disjointness_verified = false;  // never established
};

// Proportion of good primes p in [lo, hi) with q^n | order(Q mod p).
OrderSweepResult order_divisibility_sweep(const EllipticCurve& E, const ECPoint& Q, unsigned q, unsigned n,
                                          std::uint64_t lo, std::uint64_t hi, const OrderSweepOptions& opts = {});

}  // namespace arithdyn
