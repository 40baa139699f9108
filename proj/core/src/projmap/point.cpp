#include "arithdyn/projmap/point.hpp"

#include "arithdyn/error.hpp"
#include "arithdyn/exact/parse.hpp"

namespace arithdyn {

ProjPoint::ProjPoint(Integer x, Integer y) : x_(std::move(x)), y_(std::move(y)) {
  if (sgn(x_) == 0 && sgn(y_) == 0) throw MathError(Errc::kInvalidArgument, "(0 : 0) is not a point of P^1");
  if (sgn(y_) == 0) {
    x_ = 1;
    return;
  }
  Integer g = gcd_int(x_, y_);
  if (g != 1) {
    mpz_divexact(x_.get_mpz_t(), x_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(y_.get_mpz_t(), y_.get_mpz_t(), g.get_mpz_t());
  }
  if (sgn(y_) < 0) {
    x_ = -x_;
    y_ = -y_;
  }
}

Rational ProjPoint::affine() const {
  if (is_infinity()) throw MathError(Errc::kInvalidArgument, "the point at infinity has no affine coordinate");
  return Rational(x_, y_);
}

ProjPoint ProjPoint::parse(std::string_view text) {
  std::string_view t = trim(text);
  if (t == "inf" || t == "infinity" || t == "oo") return infinity();
  return ProjPoint(parse_rational(t));
}

std::string ProjPoint::to_string() const {
  if (is_infinity()) return "inf";
  if (y_ == 1) return x_.get_str();
  return x_.get_str() + "/" + y_.get_str();
}

std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b) {
  // Affine points by value, infinity last.
  if (a.is_infinity() || b.is_infinity()) return a.is_infinity() <=> b.is_infinity();
  int c = cmp(a.affine(), b.affine());
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

ProjPointModP ProjPointModP::make(std::uint64_t x, std::uint64_t y, const ModP& f) {
  if (y == 0) {
    if (x == 0) throw MathError(Errc::kInvalidArgument, "(0 : 0) is not a point of P^1(F_p)");
    return infinity();
  }
  return affine(f.mul(x, f.inv(y)));
}

std::string ProjPointModP::to_string() const { return is_infinity() ? "inf" : std::to_string(x); }

ProjPointModP reduce_point(const ProjPoint& pt, std::uint64_t p) {
  ModP f(p);
  // Coprime coordinates never both vanish mod p.
  return ProjPointModP::make(f.reduce(pt.x()), f.reduce(pt.y()), f);
}

}  // namespace arithdyn
