#include "arithdyn/lattes/lattes.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

#include "arithdyn/chebsweep/sweep.hpp"
#include "arithdyn/error.hpp"
#include "arithdyn/exact/multipoly.hpp"
#include "arithdyn/exact/parse.hpp"
#include "arithdyn/exact/primes.hpp"
#include "arithdyn/parallel.hpp"

namespace arithdyn {

EllipticCurve::EllipticCurve(Integer a, Integer b) : a_(std::move(a)), b_(std::move(b)) {
  if (discriminant() == 0) {
    throw MathError(Errc::kInvalidArgument, "singular curve y^2 = x^3 + " + arithdyn::to_string(a_) + " x + " +
                                                arithdyn::to_string(b_));
  }
}

Integer EllipticCurve::discriminant() const {
  Integer d = Integer(4) * a_ * a_ * a_ + Integer(27) * b_ * b_;
  return Integer(-16) * d;
}

PolyZ EllipticCurve::rhs() const { return PolyZ(std::vector<Integer>{b_, a_, Integer(0), Integer(1)}); }

Rational EllipticCurve::rhs(const Rational& x) const {
  Rational r = x * x * x + Rational(a_) * x + Rational(b_);
  r.canonicalize();
  return r;
}

bool EllipticCurve::good_reduction(std::uint64_t p) const {
  if (p < 3) return false;
  return mod_u64(discriminant(), p) != 0;
}

EllipticCurve EllipticCurve::parse(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::string_view v = trim(s);
  auto sp = v.find_first_of(" \t");
  if (sp == std::string_view::npos) throw ParseError("curve needs two integers \"a b\": " + s);
  Integer a = parse_integer(trim(v.substr(0, sp)));
  Integer b = parse_integer(trim(v.substr(sp)));
  return EllipticCurve(a, b);
}

std::string EllipticCurve::to_string() const { return arithdyn::to_string(a_) + " " + arithdyn::to_string(b_); }

ECPoint ECPoint::affine(Rational x, Rational y) {
  ECPoint P;
  P.inf_ = false;
  P.x_ = std::move(x);
  P.y_ = std::move(y);
  P.x_.canonicalize();
  P.y_.canonicalize();
  return P;
}

ProjPoint ECPoint::x_coordinate() const { return inf_ ? ProjPoint::infinity() : ProjPoint(x_); }

ECPoint ECPoint::parse(std::string_view text) {
  std::string s(trim(text));
  if (s == "inf" || s == "oo" || s == "infinity") return infinity();
  for (char& c : s) {
    if (c == ',' || c == '(' || c == ')') c = ' ';
  }
  std::string_view v = trim(s);
  auto sp = v.find_first_of(" \t");
  if (sp == std::string_view::npos) throw ParseError("point needs \"x y\" or \"inf\": " + std::string(text));
  return affine(parse_rational(trim(v.substr(0, sp))), parse_rational(trim(v.substr(sp))));
}

std::string ECPoint::to_string() const {
  if (inf_) return "inf";
  return arithdyn::to_string(x_) + " " + arithdyn::to_string(y_);
}

bool on_curve(const EllipticCurve& E, const ECPoint& P) {
  return P.is_infinity() || P.y() * P.y() == E.rhs(P.x());
}

void require_on_curve(const EllipticCurve& E, const ECPoint& P) {
  if (!on_curve(E, P)) {
    throw MathError(Errc::kInvalidArgument, "point " + P.to_string() + " is not on y^2 = x^3 + ax + b with a b = " +
                                                E.to_string());
  }
}

ECPoint ec_neg(const ECPoint& P) { return P.is_infinity() ? P : ECPoint::affine(P.x(), -P.y()); }

ECPoint ec_add(const EllipticCurve& E, const ECPoint& P, const ECPoint& Q) {
  if (P.is_infinity()) return Q;
  if (Q.is_infinity()) return P;
  Rational lambda;
  if (P.x() == Q.x()) {
    if (P.y() != Q.y() || P.y() == 0) return ECPoint::infinity();
    lambda = (3 * P.x() * P.x() + Rational(E.a())) / (2 * P.y());
  } else {
    lambda = (Q.y() - P.y()) / (Q.x() - P.x());
  }
  Rational x3 = lambda * lambda - P.x() - Q.x();
  Rational y3 = lambda * (P.x() - x3) - P.y();
  return ECPoint::affine(x3, y3);
}

ECPoint ec_mul(const EllipticCurve& E, const Integer& n, const ECPoint& P) {
  Integer k = abs(n);
  ECPoint base = n < 0 ? ec_neg(P) : P;
  ECPoint acc;
  for (std::size_t i = bit_length(k); i-- > 0;) {
    acc = ec_add(E, acc, acc);
    if (mpz_tstbit(k.get_mpz_t(), i)) acc = ec_add(E, acc, base);
  }
  return acc;
}

CurveModP CurveModP::reduce(const EllipticCurve& E, std::uint64_t p) {
  if (!E.good_reduction(p)) {
    throw MathError(Errc::kBadReduction, "curve " + E.to_string() + " has bad reduction at " + std::to_string(p));
  }
  ModP f(p);
  return CurveModP{f, f.reduce(E.a()), f.reduce(E.b())};
}

std::uint64_t CurveModP::rhs(std::uint64_t x) const {
  return field.add(field.mul(field.add(field.mul(x, x), a), x), b);
}

std::string ECPointModP::to_string() const {
  return inf ? "inf" : std::to_string(x) + " " + std::to_string(y);
}

bool p_integral(const ECPoint& P, std::uint64_t p) {
  if (P.is_infinity()) return true;
  return mod_u64(P.x().get_den(), p) != 0 && mod_u64(P.y().get_den(), p) != 0;
}

ECPointModP reduce_point(const ECPoint& P, std::uint64_t p) {
  if (P.is_infinity() || !p_integral(P, p)) return ECPointModP::infinity();
  ModP f(p);
  auto red = [&](const Rational& v) { return f.mul(f.reduce(v.get_num()), f.inv(f.reduce(v.get_den()))); };
  return ECPointModP::affine(red(P.x()), red(P.y()));
}

bool on_curve(const CurveModP& E, const ECPointModP& P) {
  return P.inf || E.field.mul(P.y, P.y) == E.rhs(P.x);
}

ECPointModP ec_neg(const CurveModP& E, const ECPointModP& P) {
  return P.inf ? P : ECPointModP::affine(P.x, E.field.neg(P.y));
}

ECPointModP ec_add(const CurveModP& E, const ECPointModP& P, const ECPointModP& Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  const ModP& f = E.field;
  std::uint64_t lambda;
  if (P.x == Q.x) {
    if (P.y != Q.y || P.y == 0) return ECPointModP::infinity();
    std::uint64_t num = f.add(f.mul(3 % f.modulus(), f.mul(P.x, P.x)), E.a);
    lambda = f.mul(num, f.inv(f.add(P.y, P.y)));
  } else {
    lambda = f.mul(f.sub(Q.y, P.y), f.inv(f.sub(Q.x, P.x)));
  }
  std::uint64_t x3 = f.sub(f.sub(f.mul(lambda, lambda), P.x), Q.x);
  std::uint64_t y3 = f.sub(f.mul(lambda, f.sub(P.x, x3)), P.y);
  return ECPointModP::affine(x3, y3);
}

ECPointModP ec_mul(const CurveModP& E, std::uint64_t n, const ECPointModP& P) {
  ECPointModP acc;
  ECPointModP base = P;
  while (n > 0) {
    if (n & 1) acc = ec_add(E, acc, base);
    base = ec_add(E, base, base);
    n >>= 1;
  }
  return acc;
}

std::optional<std::uint64_t> sqrt_modp(std::uint64_t a, const ModP& f) {
  const std::uint64_t p = f.modulus();
  a %= p;
  if (a == 0 || p == 2) return a;
  if (f.pow(a, (p - 1) / 2) != 1) return std::nullopt;
  if (p % 4 == 3) return f.pow(a, (p + 1) / 4);
  std::uint64_t q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::uint64_t z = 2;
  while (f.pow(z, (p - 1) / 2) != p - 1) ++z;
  std::uint64_t c = f.pow(z, q);
  std::uint64_t r = f.pow(a, (q + 1) / 2);
  std::uint64_t t = f.pow(a, q);
  int m = s;
  while (t != 1) {
    int i = 0;
    for (std::uint64_t u = t; u != 1; u = f.mul(u, u)) ++i;
    std::uint64_t b = c;
    for (int j = 0; j < m - i - 1; ++j) b = f.mul(b, b);
    r = f.mul(r, b);
    c = f.mul(b, b);
    t = f.mul(t, c);
    m = i;
  }
  return r;
}

namespace {

// Division-free recurrences for f_n (psi_n = f_n, or 2y f_n for even n),
// generic over the coefficient ring.
template <class R>
std::vector<R> division_table(const R& x, const R& a, const R& b, const R& one, int n) {
  auto c = [&](long k) { return one * Integer(k); };
  R rhs = x * x * x + a * x + b;
  R rhs2x16 = c(16) * rhs * rhs;
  std::vector<R> f;
  f.push_back(one - one);
  f.push_back(one);
  f.push_back(one);
  R x2 = x * x;
  R x3 = x2 * x;
  R x4 = x3 * x;
  f.push_back(c(3) * x4 + c(6) * a * x2 + c(12) * b * x - a * a);
  f.push_back(c(2) * (x4 * x2 + c(5) * a * x4 + c(20) * b * x3 - c(5) * a * a * x2 - c(4) * a * b * x - c(8) * b * b -
                      a * a * a));
  for (int k = 5; k <= n; ++k) {
    int m = k / 2;
    if (k % 2 == 1) {
      R lhs = f[m + 2] * f[m] * f[m] * f[m];
      R rhs3 = f[m - 1] * f[m + 1] * f[m + 1] * f[m + 1];
      if (m % 2 == 0) {
        f.push_back(rhs2x16 * lhs - rhs3);
      } else {
        f.push_back(lhs - rhs2x16 * rhs3);
      }
    } else {
      f.push_back(f[m] * (f[m + 2] * f[m - 1] * f[m - 1] - f[m - 2] * f[m + 1] * f[m + 1]));
    }
  }
  f.resize(static_cast<std::size_t>(n) + 1, one - one);
  return f;
}

// x([q]P) = num / den.
template <class R>
std::pair<R, R> lattes_fraction(const R& x, const R& a, const R& b, const R& one, unsigned q) {
  auto f = division_table(x, a, b, one, static_cast<int>(q) + 1);
  R rhs4 = one * Integer(4) * (x * x * x + a * x + b);
  R fq2 = f[q] * f[q];
  if (q % 2 == 0) {
    R den = rhs4 * fq2;
    return {x * den - f[q - 1] * f[q + 1], den};
  }
  return {x * fq2 - rhs4 * f[q - 1] * f[q + 1], fq2};
}

void require_supported(unsigned q) {
  if (std::find(std::begin(kLattesSupportedQ), std::end(kLattesSupportedQ), q) == std::end(kLattesSupportedQ)) {
    throw MathError(Errc::kUnsupportedQ, "q = " + std::to_string(q) + " is not one of 2, 3, 5, 7");
  }
}

// (u + v y) / w in the function field of y^2 = rhs over Z[x, a, b].
struct FunctionFieldElt {
  MultiPoly u, v, w;
};

struct FunctionField {
  MultiPoly rhs;

  FunctionFieldElt add(const FunctionFieldElt& p, const FunctionFieldElt& q) const {
    return {p.u * q.w + q.u * p.w, p.v * q.w + q.v * p.w, p.w * q.w};
  }
  FunctionFieldElt sub(const FunctionFieldElt& p, const FunctionFieldElt& q) const {
    return {p.u * q.w - q.u * p.w, p.v * q.w - q.v * p.w, p.w * q.w};
  }
  FunctionFieldElt mul(const FunctionFieldElt& p, const FunctionFieldElt& q) const {
    return {p.u * q.u + p.v * q.v * rhs, p.u * q.v + p.v * q.u, p.w * q.w};
  }
  FunctionFieldElt inv(const FunctionFieldElt& p) const {
    MultiPoly norm = p.u * p.u - p.v * p.v * rhs;
    return {p.u * p.w, p.v * p.w * Integer(-1), norm};
  }
};

struct GenericPoint {
  FunctionFieldElt x, y;
};

GenericPoint ff_double(const FunctionField& K, const GenericPoint& P, const MultiPoly& a) {
  const std::size_t nv = a.nvars();
  MultiPoly one = MultiPoly::constant(nv, Integer(1));
  FunctionFieldElt three{MultiPoly::constant(nv, Integer(3)), MultiPoly(nv), one};
  FunctionFieldElt two{MultiPoly::constant(nv, Integer(2)), MultiPoly(nv), one};
  FunctionFieldElt av{a, MultiPoly(nv), one};
  FunctionFieldElt lambda = K.mul(K.add(K.mul(three, K.mul(P.x, P.x)), av), K.inv(K.mul(two, P.y)));
  FunctionFieldElt x3 = K.sub(K.sub(K.mul(lambda, lambda), P.x), P.x);
  FunctionFieldElt y3 = K.sub(K.mul(lambda, K.sub(P.x, x3)), P.y);
  return {x3, y3};
}

GenericPoint ff_add(const FunctionField& K, const GenericPoint& P, const GenericPoint& Q) {
  FunctionFieldElt lambda = K.mul(K.sub(Q.y, P.y), K.inv(K.sub(Q.x, P.x)));
  FunctionFieldElt x3 = K.sub(K.sub(K.mul(lambda, lambda), P.x), Q.x);
  FunctionFieldElt y3 = K.sub(K.mul(lambda, K.sub(P.x, x3)), P.y);
  return {x3, y3};
}

// Variables (x, a, b). Compares num/den against x([q]P) from the group law.
bool group_law_identity(unsigned q, const MultiPoly& a, const MultiPoly& b, const MultiPoly& num,
                        const MultiPoly& den) {
  const std::size_t nv = 3;
  MultiPoly x = MultiPoly::variable(nv, 0);
  MultiPoly one = MultiPoly::constant(nv, Integer(1));
  FunctionField K{x * x * x + a * x + b};
  GenericPoint P{{x, MultiPoly(nv), one}, {MultiPoly(nv), one, one}};
  GenericPoint R = ff_double(K, P, a);
  for (unsigned k = 2; k < q; ++k) R = ff_add(K, R, P);
  return R.x.v.is_zero() && R.x.u * den == R.x.w * num;
}

MultiPoly lift(const PolyZ& f) {
  MultiPoly out(3);
  for (int i = 0; i <= f.degree(); ++i) {
    if (f.coeff(i) != 0) out.add_term({static_cast<std::uint32_t>(i), 0, 0}, f.coeff(i));
  }
  return out;
}

}  // namespace

std::vector<PolyZ> division_polynomials(const EllipticCurve& E, int n) {
  if (n < 0) throw MathError(Errc::kInvalidArgument, "negative division polynomial index");
  auto f = division_table(PolyZ::x(), PolyZ::constant(E.a()), PolyZ::constant(E.b()), PolyZ::constant(Integer(1)),
                          std::max(n, 4));
  f.resize(static_cast<std::size_t>(n) + 1);
  return f;
}

LattesMap lattes_map(const EllipticCurve& E, unsigned q) {
  require_supported(q);
  auto [num, den] = lattes_fraction(PolyZ::x(), PolyZ::constant(E.a()), PolyZ::constant(E.b()),
                                    PolyZ::constant(Integer(1)), q);
  return LattesMap{E, q, RationalMap(num, den)};
}

bool lattes_identity_generic(unsigned q) {
  if (q != 2 && q != 3) throw MathError(Errc::kUnsupportedQ, "generic identity is checked for q = 2, 3 only");
  MultiPoly x = MultiPoly::variable(3, 0);
  MultiPoly a = MultiPoly::variable(3, 1);
  MultiPoly b = MultiPoly::variable(3, 2);
  auto [num, den] = lattes_fraction(x, a, b, MultiPoly::constant(3, Integer(1)), q);
  return group_law_identity(q, a, b, num, den);
}

namespace {

std::vector<ECPoint> small_rational_points(const EllipticCurve& E) {
  std::vector<ECPoint> out;
  for (long d = 1; d <= 3; ++d) {
    for (long n = -60; n <= 60; ++n) {
      if (std::gcd(n, d) != 1) continue;
      Rational x(Integer(n), Integer(d * d));
      x.canonicalize();
      Rational r = E.rhs(x);
      if (r < 0) continue;
      if (!mpz_perfect_square_p(r.get_num().get_mpz_t()) || !mpz_perfect_square_p(r.get_den().get_mpz_t())) continue;
      out.push_back(ECPoint::affine(x, Rational(sqrt(r.get_num()), sqrt(r.get_den()))));
    }
  }
  return out;
}

std::uint64_t random_prime(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t n = lo + rng() % (hi - lo);
  while (!is_prime(n)) ++n;
  return n;
}

}  // namespace

SemiconjugacyReport verify_semiconjugacy(const LattesMap& lm, std::size_t trials, std::uint64_t seed) {
  SemiconjugacyReport rep;
  const EllipticCurve& E = lm.curve;
  const Integer q(lm.q);
  auto fail = [&](std::string field, std::string point, std::string expected, std::string actual) {
    rep.holds = false;
    rep.witness = SemiconjugacyWitness{std::move(field), std::move(point), std::move(expected), std::move(actual)};
  };

  // Rational points: infinity, then small points and their multiples.
  std::vector<ECPoint> pts{ECPoint::infinity()};
  std::vector<ECPoint> base = small_rational_points(E);
  for (int k = 1; k <= 8 && pts.size() < trials; ++k) {
    for (const auto& P : base) {
      ECPoint kP = ec_mul(E, Integer(k), P);
      if (kP.is_infinity() || bit_length(kP.x().get_num()) > 256 || bit_length(kP.x().get_den()) > 256) continue;
      if (std::find(pts.begin(), pts.end(), kP) == pts.end()) pts.push_back(kP);
      if (pts.size() >= trials) break;
    }
  }
  for (const auto& P : pts) {
    if (rep.rational_points >= trials) break;
    ++rep.rational_points;
    ProjPoint expected = ec_mul(E, q, P).x_coordinate();
    ProjPoint actual = apply(lm.map, P.x_coordinate());
    if (expected != actual) {
      fail("Q", P.to_string(), expected.to_string(), actual.to_string());
      return rep;
    }
  }

  std::mt19937_64 rng(seed);
  while (rep.rational_points + rep.modp_points < trials) {
    std::uint64_t p = random_prime(rng, 1000, 1000000);
    if (!E.good_reduction(p) || !good_reduction(lm.map, p)) continue;
    CurveModP Ep = CurveModP::reduce(E, p);
    ReducedMap mp = reduce_map(lm.map, p);
    for (int i = 0; i < 8 && rep.rational_points + rep.modp_points < trials; ++i) {
      std::uint64_t x = rng() % p;
      auto y = sqrt_modp(Ep.rhs(x), Ep.field);
      if (!y) continue;
      ++rep.modp_points;
      ECPointModP P = ECPointModP::affine(x, *y);
      ECPointModP qP = ec_mul(Ep, lm.q, P);
      ProjPointModP expected = qP.inf ? ProjPointModP::infinity() : ProjPointModP::affine(qP.x);
      ProjPointModP actual = apply(mp, ProjPointModP::affine(x));
      if (expected != actual) {
        fail("F_" + std::to_string(p), P.to_string(), expected.to_string(), actual.to_string());
        return rep;
      }
    }
  }

  if (lm.q == 2 || lm.q == 3) {
    rep.symbolic_checked = true;
    MultiPoly a = MultiPoly::constant(3, E.a());
    MultiPoly b = MultiPoly::constant(3, E.b());
    if (!group_law_identity(lm.q, a, b, lift(lm.map.num()), lift(lm.map.den()))) {
      fail("symbolic", "generic point", "x([" + std::to_string(lm.q) + "]P)", lm.map.to_string());
    }
  }
  return rep;
}

namespace {

struct PointHash {
  std::size_t operator()(const ECPointModP& P) const noexcept {
    return P.inf ? ~std::size_t{0} : std::hash<std::uint64_t>{}(P.x * 0x9e3779b97f4a7c15ULL ^ P.y);
  }
};

}  // namespace

std::uint64_t point_order_modp(const EllipticCurve& E, const ECPoint& Q, std::uint64_t p) {
  CurveModP Ep = CurveModP::reduce(E, p);
  if (!p_integral(Q, p)) {
    throw MathError(Errc::kBadReduction, "point " + Q.to_string() + " is not integral at " + std::to_string(p));
  }
  ECPointModP P = reduce_point(Q, p);
  if (!on_curve(Ep, P)) throw MathError(Errc::kInvalidArgument, "point is not on the curve");
  if (P.inf) return 1;

  // Some multiple of the order lies in the Hasse window; find one by
  // baby-step giant-step, then strip prime factors.
  const std::uint64_t r = isqrt_u64(p) + 1;
  const std::uint64_t lo = p + 1 > 2 * r ? p + 1 - 2 * r : 1;
  const std::uint64_t width = 4 * r + 1;
  const std::uint64_t s = isqrt_u64(width) + 1;
  std::unordered_map<ECPointModP, std::uint64_t, PointHash> baby;
  ECPointModP cur;
  for (std::uint64_t j = 0; j < s; ++j) {
    baby.emplace(cur, j);
    cur = ec_add(Ep, cur, P);
  }
  const ECPointModP step = ec_neg(Ep, ec_mul(Ep, s, P));
  ECPointModP giant = ec_mul(Ep, lo, P);
  std::uint64_t m = 0;
  for (std::uint64_t i = 0; i * s <= width + s; ++i) {
    // [lo + i s]P + [j]P = O  iff  [j]P = -[lo + i s]P.
    auto it = baby.find(ec_neg(Ep, giant));
    if (it != baby.end() && lo + i * s + it->second > 0) {
      m = lo + i * s + it->second;
      break;
    }
    giant = ec_add(Ep, giant, ec_neg(Ep, step));
  }
  if (m == 0) throw std::logic_error("no multiple of the point order in the Hasse window");
  for (const auto& [ell, e] : factor_u64(m)) {
    for (int k = 0; k < e && ec_mul(Ep, m / ell, P).inf; ++k) m /= ell;
  }
  return m;
}

std::optional<int> small_torsion_order(const EllipticCurve& E, const ECPoint& Q) {
  ECPoint acc = Q;
  for (int m = 1; m <= kTorsionSearchBound; ++m) {
    if (acc.is_infinity()) return m;
    acc = ec_add(E, acc, Q);
  }
  return std::nullopt;
}

OrderSweepResult order_divisibility_sweep(const EllipticCurve& E, const ECPoint& Q, unsigned q, unsigned n,
                                          std::uint64_t lo, std::uint64_t hi, const OrderSweepOptions& opts) {
  require_on_curve(E, Q);
  if (q < 2 || !is_prime(std::uint64_t{q})) throw MathError(Errc::kInvalidArgument, "q must be prime");
  OrderSweepResult res;
  res.torsion_order = small_torsion_order(E, Q);
  if (res.torsion_order && opts.torsion == TorsionPolicy::kReject) {
    throw MathError(Errc::kTorsionInput, "point " + Q.to_string() + " has order " +
                                             std::to_string(*res.torsion_order) + " over Q");
  }
  Integer qn = pow_int(Integer(q), n);

  std::vector<std::uint64_t> primes;
  for (std::uint64_t p : prime_range(lo, hi)) {
    if (E.good_reduction(p) && p_integral(Q, p)) primes.push_back(p);
  }
  res.primes.resize(primes.size());
  parallel_for(primes.size(), opts.workers, [&](std::size_t i) {
    std::uint64_t ord = point_order_modp(E, Q, primes[i]);
    res.primes[i] = OrderSweepPrime{primes[i], ord, from_u64(ord) % qn == 0};
  });
  std::uint64_t hits = 0;
  for (const auto& r : res.primes) hits += r.divisible ? 1 : 0;
  res.density = make_density(hits, res.primes.size());

  bool supported = std::find(std::begin(kLattesSupportedQ), std::end(kLattesSupportedQ), q) != std::end(kLattesSupportedQ);
  if (!opts.cross_check || n == 0 || !supported) return res;
  ECPoint T = ec_mul(E, pow_int(Integer(q), n - 1), Q);
  if (T.is_infinity()) return res;
  LattesMap lm = lattes_map(E, q);
  std::optional<TargetSystem> sys;
  try {
    sys.emplace(std::vector<TargetEntry>{TargetEntry{lm.map, {T.x_coordinate()}}}, 1);
  } catch (const MathError& e) {
    // A periodic target is never deranged, so there is nothing to compare.
    if (e.code() != Errc::kPeriodicInput) throw;
    return res;
  }
  res.cross_check_system = sys->canonical_text();
  SweepOptions so;
  so.workers = opts.workers;
  SweepResult sw = sweep(*sys, lo, hi, so);
  std::map<std::uint64_t, const OrderSweepPrime*> by_p;
  for (const auto& r : res.primes) by_p.emplace(r.p, &r);
  for (const auto& rec : sw.records) {
    auto it = by_p.find(rec.p);
    if (it == by_p.end()) continue;
    ++res.cross_check_primes;
    if (!rec.derangement) continue;
    ++res.cross_check_derangements;
    if (!it->second->divisible) res.cross_check_violations.push_back(rec.p);
  }
  return res;
}

}  // namespace arithdyn
