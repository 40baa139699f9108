#pragma once

#include <cstdint>
#include <optional>

#include "arithdyn/exact/poly_z.hpp"
#include "arithdyn/projmap/rational_map.hpp"

namespace arithdyn {

// f = b F_m(x, 1) - a G_m(x, 1) divided by its positive content, where
// alpha = (a : b) and phi^m = [F_m : G_m]. At a prime of good reduction that
// is not bad for f, the roots of f mod p are the affine points z of P^1(F_p)
// with phi^m(z) = alpha.
struct IteratePoly {
  RationalMap map;
  ProjPoint alpha;
  int level = 1;
  PolyZ f;
  int formal_degree = 0;  // d^m; deg f is smaller exactly when phi^m(inf) = alpha
  ProjPoint image_of_infinity = ProjPoint::infinity();  // phi^m(inf)
  // disc(f) * Res(F, G) * lc(f) when deg f <= kBadModulusMaxDegree.
  std::optional<Integer> bad_modulus;

  // p <= deg phi, bad reduction, p | lc(f), or f mod p not squarefree.
  bool is_bad_prime(std::uint64_t p) const;
};

inline constexpr int kBadModulusMaxDegree = 64;

// Throws MathError(kDegreeCapExceeded) if d^m > cap.
IteratePoly build_iterate_poly(const RationalMap& map, const ProjPoint& alpha, int m, int cap = kIterateDegreeCap);

// Same, reusing an already computed phi^m.
IteratePoly build_iterate_poly_from(const RationalMap& map, const RationalMap& phi_m, const ProjPoint& alpha, int m);

struct RootCount {
  int affine = 0;         // distinct roots of f in F_p
  bool infinity = false;  // phi_p^m(inf) = alpha mod p
  int total() const { return affine + (infinity ? 1 : 0); }
};

// deg gcd(x^p - x mod f, f) plus the homogeneous check at infinity.
// Throws MathError(kBadPrime) when ip.is_bad_prime(p).
RootCount root_count_modp(const IteratePoly& ip, std::uint64_t p);

// Without the eligibility check; the caller has already done it.
RootCount root_count_unchecked(const IteratePoly& ip, std::uint64_t p);

}  // namespace arithdyn
