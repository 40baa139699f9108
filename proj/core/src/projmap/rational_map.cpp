#include "arithdyn/projmap/rational_map.hpp"

#include <algorithm>

#include "arithdyn/error.hpp"
#include "arithdyn/exact/parse.hpp"

namespace arithdyn {
namespace {

std::uint64_t eval_form(const PolyFp& f, int d, std::uint64_t X, std::uint64_t Y) {
  const ModP& m = f.field();
  if (Y == 1) return f.eval(X);
  if (Y == 0) return f.coeff(d);
  std::uint64_t acc = f.coeff(d), ypow = 1;
  for (int i = d - 1; i >= 0; --i) {
    ypow = m.mul(ypow, Y);
    acc = m.add(m.mul(acc, X), m.mul(f.coeff(i), ypow));
  }
  return acc;
}

PolyFp form_dx(const PolyFp& f, int d) {
  const ModP& m = f.field();
  std::vector<std::uint64_t> c(static_cast<std::size_t>(d), 0);
  for (int i = 1; i <= d; ++i) c[i - 1] = m.mul(m.reduce(std::int64_t{i}), f.coeff(i));
  return PolyFp(f.modulus(), std::move(c));
}

PolyFp form_dy(const PolyFp& f, int d) {
  const ModP& m = f.field();
  std::vector<std::uint64_t> c(static_cast<std::size_t>(d), 0);
  for (int i = 0; i < d; ++i) c[i] = m.mul(m.reduce(std::int64_t{d - i}), f.coeff(i));
  return PolyFp(f.modulus(), std::move(c));
}

}  // namespace

Integer BinaryForm::eval(const Integer& X, const Integer& Y) const {
  if (Y == 1) return poly.eval(X);
  Integer acc = coeff(degree), ypow(1);
  for (int i = degree - 1; i >= 0; --i) {
    ypow *= Y;
    acc = acc * X + coeff(i) * ypow;
  }
  return acc;
}

std::uint64_t BinaryForm::eval(std::uint64_t X, std::uint64_t Y, const ModP& f) const {
  return eval_form(PolyFp::from_z(f.modulus(), poly), degree, X, Y);
}

BinaryForm BinaryForm::d_dx() const {
  std::vector<Integer> c(static_cast<std::size_t>(std::max(degree, 0)), Integer(0));
  for (int i = 1; i <= degree; ++i) c[i - 1] = coeff(i) * i;
  return {PolyZ(std::move(c)), degree - 1};
}

BinaryForm BinaryForm::d_dy() const {
  std::vector<Integer> c(static_cast<std::size_t>(std::max(degree, 0)), Integer(0));
  for (int i = 0; i < degree; ++i) c[i] = coeff(i) * (degree - i);
  return {PolyZ(std::move(c)), degree - 1};
}

BinaryForm operator-(const BinaryForm& a, const BinaryForm& b) {
  if (a.degree != b.degree) throw MathError(Errc::kInvalidArgument, "forms of different degree");
  return {a.poly - b.poly, a.degree};
}

Integer homogeneous_resultant(const BinaryForm& F, const BinaryForm& G) {
  const int d = F.degree;
  if (G.degree != d) throw MathError(Errc::kInvalidArgument, "forms of different degree");
  const PolyZ& f = F.poly;
  const PolyZ& g = G.poly;
  if (f.is_zero() || g.is_zero()) return Integer(0);
  if (f.degree() == d) return pow_int(f.lead(), static_cast<unsigned long>(d - g.degree())) * resultant(f, g);
  if (g.degree() == d) {
    Integer r = pow_int(g.lead(), static_cast<unsigned long>(d - f.degree())) * resultant(g, f);
    return d % 2 ? Integer(-r) : r;
  }
  return Integer(0);  // common zero at infinity
}

RationalMap::RationalMap(PolyZ f, PolyZ g, int d)
    : f_(std::move(f)), g_(std::move(g)), d_(d), res_(std::make_shared<Lazy>()) {
  normalize();
}

RationalMap::RationalMap(PolyZ f, PolyZ g) : RationalMap(std::move(f), std::move(g), 0) {
  d_ = std::max(f_.degree(), g_.degree());
  if (d_ < 2) throw MathError(Errc::kInvalidArgument, "map degree must be at least 2");
  Integer r = homogeneous_resultant(F(), G());
  if (sgn(r) == 0) throw MathError(Errc::kInvalidArgument, "F and G share a common factor: " + to_string());
  std::call_once(res_->once, [&] { res_->value = std::move(r); });
}

RationalMap RationalMap::trusted(PolyZ f, PolyZ g, int d) { return RationalMap(std::move(f), std::move(g), d); }

void RationalMap::normalize() {
  Integer c = gcd_int(f_.content(), g_.content());
  if (c > 1) {
    f_ = f_.divexact(c);
    g_ = g_.divexact(c);
  }
  const PolyZ& first = f_.is_zero() ? g_ : f_;
  if (!first.is_zero() && sgn(first.lead()) < 0) {
    f_ = -f_;
    g_ = -g_;
  }
}

const Integer& RationalMap::resultant() const {
  std::call_once(res_->once, [this] { res_->value = homogeneous_resultant(F(), G()); });
  return res_->value;
}

RationalMap RationalMap::parse(std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw ParseError("unbalanced bracket in map '" + std::string(text) + "'");
    t = trim(t.substr(1, t.size() - 2));
  }
  std::size_t colon = t.find(':');
  if (colon != std::string_view::npos && t.find(':', colon + 1) != std::string_view::npos) {
    throw ParseError("map '" + std::string(text) + "' has more than one ':'");
  }
  PolyZ f = parse_poly(colon == std::string_view::npos ? t : t.substr(0, colon));
  PolyZ g = colon == std::string_view::npos ? PolyZ{1} : parse_poly(t.substr(colon + 1));
  return RationalMap(std::move(f), std::move(g));
}

std::string RationalMap::to_string() const { return f_.to_string() + " : " + g_.to_string(); }

bool good_reduction(const RationalMap& map, std::uint64_t p) {
  PolyFp f = PolyFp::from_z(p, map.num());
  PolyFp g = PolyFp::from_z(p, map.den());
  const int d = map.degree();
  if (f.degree() < d && g.degree() < d) return false;
  return gcd(f, g).degree() <= 0;
}

ReducedMap reduce_map(const RationalMap& map, std::uint64_t p) {
  if (!good_reduction(map, p)) {
    throw MathError(Errc::kBadReduction, "map " + map.to_string() + " has bad reduction at p = " + std::to_string(p));
  }
  return ReducedMap(PolyFp::from_z(p, map.num()), PolyFp::from_z(p, map.den()), map.degree());
}

RationalMap compose(const RationalMap& f, const RationalMap& g, int cap) {
  const long deg = static_cast<long>(f.degree()) * g.degree();
  if (deg > cap) {
    throw MathError(Errc::kDegreeCapExceeded,
                    "composite degree " + std::to_string(deg) + " exceeds cap " + std::to_string(cap));
  }
  const int d = f.degree();
  std::vector<PolyZ> pa{PolyZ{1}}, pb{PolyZ{1}};
  for (int i = 1; i <= d; ++i) {
    pa.push_back(pa.back() * g.num());
    pb.push_back(pb.back() * g.den());
  }
  PolyZ h1, h2;
  for (int i = 0; i <= d; ++i) {
    Integer a = f.num().coeff(i), b = f.den().coeff(i);
    if (sgn(a) == 0 && sgn(b) == 0) continue;
    PolyZ t = pa[i] * pb[d - i];
    if (sgn(a) != 0) h1 += t * a;
    if (sgn(b) != 0) h2 += t * b;
  }
  return RationalMap::trusted(std::move(h1), std::move(h2), static_cast<int>(deg));
}

RationalMap iterate(const RationalMap& map, int m, int cap) {
  if (m < 1) throw MathError(Errc::kInvalidArgument, "iterate count must be at least 1");
  long deg = 1;
  for (int i = 0; i < m; ++i) {
    deg *= map.degree();
    if (deg > cap) {
      throw MathError(Errc::kDegreeCapExceeded, "iterate " + std::to_string(m) + " of a degree " +
                                                    std::to_string(map.degree()) + " map exceeds cap " +
                                                    std::to_string(cap));
    }
  }
  RationalMap r = map;
  for (int i = 1; i < m; ++i) r = compose(map, r, cap);
  return r;
}

ProjPoint apply(const RationalMap& map, const ProjPoint& pt) {
  return ProjPoint(map.F().eval(pt.x(), pt.y()), map.G().eval(pt.x(), pt.y()));
}

ProjPointModP apply(const ReducedMap& map, const ProjPointModP& pt) {
  const int d = map.degree();
  return ProjPointModP::make(eval_form(map.num(), d, pt.x, pt.y), eval_form(map.den(), d, pt.x, pt.y), map.field());
}

BinaryForm wronskian(const RationalMap& map) {
  BinaryForm F = map.F(), G = map.G();
  return F.d_dx() * G.d_dy() - F.d_dy() * G.d_dx();
}

std::vector<ProjPointModP> critical_points_modp(const ReducedMap& map) {
  const std::uint64_t p = map.modulus();
  const int d = map.degree();
  if (p <= static_cast<std::uint64_t>(2 * d)) {
    throw MathError(Errc::kCharTooSmall, "critical points need p > 2d; p = " + std::to_string(p) +
                                             ", d = " + std::to_string(d));
  }
  PolyFp w = form_dx(map.num(), d) * form_dy(map.den(), d) - form_dy(map.num(), d) * form_dx(map.den(), d);
  std::vector<ProjPointModP> out;
  if (w.is_zero()) {
    for (std::uint64_t i = 0; i <= p; ++i) out.push_back(ProjPointModP::from_index(i, p));
    return out;
  }
  if (w.degree() >= 1) {
    for (std::uint64_t r : roots(w)) out.push_back(ProjPointModP::affine(r));
  }
  if (w.degree() < 2 * d - 2) out.push_back(ProjPointModP::infinity());
  return out;
}

std::vector<ProjPointModP> critical_points_modp(const RationalMap& map, std::uint64_t p) {
  return critical_points_modp(reduce_map(map, p));
}

}  // namespace arithdyn
