#include "arithdyn/chebsweep/iterate_poly.hpp"

#include "arithdyn/error.hpp"
#include "arithdyn/exact/poly_fp.hpp"

namespace arithdyn {

IteratePoly build_iterate_poly_from(const RationalMap& map, const RationalMap& phi_m, const ProjPoint& alpha, int m) {
  IteratePoly ip{map, alpha, m, PolyZ(), phi_m.degree(), apply(phi_m, ProjPoint::infinity()), std::nullopt};
  PolyZ f = phi_m.num() * alpha.y() - phi_m.den() * alpha.x();
  Integer c = f.content();
  ip.f = c > 1 ? f.divexact(c) : std::move(f);
  if (ip.f.degree() <= kBadModulusMaxDegree) {
    ip.bad_modulus = discriminant(ip.f) * map.resultant() * ip.f.lead();
  }
  return ip;
}

IteratePoly build_iterate_poly(const RationalMap& map, const ProjPoint& alpha, int m, int cap) {
  return build_iterate_poly_from(map, iterate(map, m, cap), alpha, m);
}

bool IteratePoly::is_bad_prime(std::uint64_t p) const {
  if (p <= static_cast<std::uint64_t>(map.degree())) return true;
  if (!good_reduction(map, p)) return true;
  if (mod_u64(f.lead(), p) == 0) return true;
  if (f.degree() < 1) return false;
  PolyFp fp = PolyFp::from_z(p, f);
  return gcd(fp, fp.derivative()).degree() > 0;
}

RootCount root_count_unchecked(const IteratePoly& ip, std::uint64_t p) {
  RootCount rc;
  if (ip.f.degree() >= 1) rc.affine = distinct_root_count(PolyFp::from_z(p, ip.f));
  rc.infinity = reduce_point(ip.image_of_infinity, p) == reduce_point(ip.alpha, p);
  return rc;
}

RootCount root_count_modp(const IteratePoly& ip, std::uint64_t p) {
  if (ip.is_bad_prime(p)) {
    throw MathError(Errc::kBadPrime, "p = " + std::to_string(p) + " is a bad prime for " + ip.f.to_string());
  }
  return root_count_unchecked(ip, p);
}

}  // namespace arithdyn
