#include "arithdyn/exact/poly_z.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "arithdyn/error.hpp"

namespace arithdyn {
namespace {

constexpr std::size_t kKroneckerThreshold = 24;

void check_degree(std::size_t size) {
  if (size > static_cast<std::size_t>(kPolyDegreeCap) + 1) {
    throw MathError(Errc::kDegreeCapExceeded,
                    "polynomial degree " + std::to_string(size - 1) + " exceeds cap " + std::to_string(kPolyDegreeCap));
  }
}

std::vector<Integer> schoolbook(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  std::vector<Integer> r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return r;
}

std::size_t max_bits(const std::vector<Integer>& v) {
  std::size_t m = 0;
  for (const auto& c : v) m = std::max(m, bit_length(c));
  return m;
}

// Packs sum_i c_i 2^(64 w i) as (positive part) - (negative part).
Integer pack(const std::vector<Integer>& v, std::size_t w) {
  std::vector<std::uint64_t> pos(v.size() * w, 0), neg(v.size() * w, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (sgn(v[i]) == 0) continue;
    auto& buf = sgn(v[i]) > 0 ? pos : neg;
    mpz_export(buf.data() + i * w, nullptr, -1, sizeof(std::uint64_t), 0, 0, v[i].get_mpz_t());
  }
  Integer p, n;
  mpz_import(p.get_mpz_t(), pos.size(), -1, sizeof(std::uint64_t), 0, 0, pos.data());
  mpz_import(n.get_mpz_t(), neg.size(), -1, sizeof(std::uint64_t), 0, 0, neg.data());
  return p - n;
}

// Balanced base-2^(64 w) digits of c, least significant first.
std::vector<Integer> unpack(const Integer& c, std::size_t w, std::size_t count) {
  std::vector<Integer> out(count);
  if (sgn(c) == 0) return out;
  Integer mag = abs(c);
  std::size_t limbs = (bit_length(mag) + 63) / 64;
  std::vector<std::uint64_t> buf(std::max(limbs, count * w) + w, 0);
  mpz_export(buf.data(), nullptr, -1, sizeof(std::uint64_t), 0, 0, mag.get_mpz_t());
  Integer base;
  mpz_setbit(base.get_mpz_t(), 64 * w);
  Integer half;
  mpz_setbit(half.get_mpz_t(), 64 * w - 1);
  int carry = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Integer d;
    mpz_import(d.get_mpz_t(), w, -1, sizeof(std::uint64_t), 0, 0, buf.data() + i * w);
    d += carry;
    carry = 0;
    if (d >= half) {
      d -= base;
      carry = 1;
    }
    out[i] = sgn(c) < 0 ? Integer(-d) : d;
  }
  return out;
}

std::vector<Integer> kronecker(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t bits = max_bits(a) + max_bits(b) + bit_length(Integer(static_cast<unsigned long>(n))) + 2;
  std::size_t w = (bits + 63) / 64;
  Integer pa = pack(a, w);
  Integer pb = (&a == &b) ? pa : pack(b, w);
  Integer prod = pa * pb;
  return unpack(prod, w, a.size() + b.size() - 1);
}

}  // namespace

PolyZ::PolyZ(std::vector<Integer> coeffs) : c_(std::move(coeffs)) {
  trim();
  check_degree(c_.size());
}

PolyZ::PolyZ(std::initializer_list<long> coeffs) {
  c_.reserve(coeffs.size());
  for (long v : coeffs) c_.emplace_back(v);
  trim();
}

PolyZ PolyZ::constant(const Integer& c) { return PolyZ(std::vector<Integer>{c}); }

PolyZ PolyZ::monomial(const Integer& c, int k) {
  std::vector<Integer> v(static_cast<std::size_t>(k) + 1);
  v[k] = c;
  return PolyZ(std::move(v));
}

void PolyZ::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Integer PolyZ::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Integer(0);
  return c_[i];
}

const Integer& PolyZ::lead() const {
  static const Integer kZero(0);
  return c_.empty() ? kZero : c_.back();
}

Integer PolyZ::content() const {
  Integer g(0);
  for (const auto& c : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

PolyZ PolyZ::primitive_part() const {
  if (is_zero()) return *this;
  return divexact(content());
}

PolyZ PolyZ::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Integer> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return PolyZ(std::move(d));
}

Integer PolyZ::eval(const Integer& x) const {
  Integer r(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    r *= x;
    r += *it;
  }
  return r;
}

PolyZ PolyZ::divexact(const Integer& c) const {
  PolyZ r = *this;
  for (auto& v : r.c_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), c.get_mpz_t());
  return r;
}

PolyZ PolyZ::operator-() const {
  PolyZ r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

PolyZ& PolyZ::operator+=(const PolyZ& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

PolyZ& PolyZ::operator-=(const PolyZ& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

PolyZ& PolyZ::operator*=(const Integer& c) {
  if (sgn(c) == 0) {
    c_.clear();
    return *this;
  }
  for (auto& v : c_) v *= c;
  return *this;
}

PolyZ operator*(const PolyZ& a, const PolyZ& b) {
  if (a.is_zero() || b.is_zero()) return {};
  check_degree(a.c_.size() + b.c_.size() - 1);
  if (std::min(a.c_.size(), b.c_.size()) < kKroneckerThreshold) return PolyZ(schoolbook(a.c_, b.c_));
  return PolyZ(kronecker(a.c_, b.c_));
}

std::string PolyZ::to_string(char var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Integer& c = c_[i];
    if (sgn(c) == 0) continue;
    Integer mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << '*';
    os << var;
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

PolyZ pow(const PolyZ& base, unsigned exponent) {
  PolyZ result = PolyZ::constant(Integer(1));
  PolyZ b = base;
  while (exponent) {
    if (exponent & 1) result = result * b;
    exponent >>= 1;
    if (exponent) b = b * b;
  }
  return result;
}

PolyZ pseudo_remainder(const PolyZ& a, const PolyZ& b) {
  if (b.is_zero()) throw MathError(Errc::kInvalidArgument, "pseudo-remainder by zero polynomial");
  if (a.degree() < b.degree()) return a;
  std::vector<Integer> r = a.coeffs();
  const std::vector<Integer>& bc = b.coeffs();
  const int db = b.degree();
  const Integer& lb = bc.back();
  int steps = a.degree() - db + 1;
  int dr = a.degree();
  int used = 0;
  while (dr >= db) {
    Integer lr = r[dr];
    for (auto& v : r) v *= lb;
    const int shift = dr - db;
    for (int i = 0; i <= db; ++i) mpz_submul(r[i + shift].get_mpz_t(), lr.get_mpz_t(), bc[i].get_mpz_t());
    ++used;
    while (dr >= 0 && sgn(r[dr]) == 0) --dr;
    r.resize(static_cast<std::size_t>(dr + 1));
  }
  Integer scale = pow_int(lb, static_cast<unsigned long>(steps - used));
  PolyZ out(std::move(r));
  return out * scale;
}

Integer resultant(const PolyZ& f, const PolyZ& g) {
  if (f.is_zero() || g.is_zero()) {
    throw MathError(Errc::kInvalidArgument, "resultant with the zero polynomial");
  }
  PolyZ a = f, b = g;
  int sign = 1;
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() & 1) && (b.degree() & 1)) sign = -sign;
  }
  if (b.degree() == 0) {
    Integer r = pow_int(b.lead(), static_cast<unsigned long>(a.degree()));
    return sign < 0 ? Integer(-r) : r;
  }
  Integer ca = a.content(), cb = b.content();
  a = a.divexact(ca);
  b = b.divexact(cb);
  Integer t = pow_int(ca, static_cast<unsigned long>(b.degree())) * pow_int(cb, static_cast<unsigned long>(a.degree()));
  Integer gg(1), h(1);
  while (true) {
    const int delta = a.degree() - b.degree();
    if ((a.degree() & 1) && (b.degree() & 1)) sign = -sign;
    PolyZ r = pseudo_remainder(a, b);
    a = std::move(b);
    if (r.is_zero()) return Integer(0);
    b = r.divexact(gg * pow_int(h, static_cast<unsigned long>(delta)));
    gg = a.lead();
    if (delta > 0) {
      Integer num = pow_int(gg, static_cast<unsigned long>(delta));
      Integer den = pow_int(h, static_cast<unsigned long>(delta - 1));
      mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    if (b.degree() == 0) break;
  }
  const int da = a.degree();
  Integer num = pow_int(b.lead(), static_cast<unsigned long>(da));
  Integer den = pow_int(h, static_cast<unsigned long>(da - 1));
  Integer hh;
  mpz_divexact(hh.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Integer res = t * hh;
  return sign < 0 ? Integer(-res) : res;
}

Integer discriminant(const PolyZ& f) {
  const int n = f.degree();
  if (n <= 0) return Integer(1);
  Integer r = resultant(f, f.derivative());
  Integer d;
  mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), f.lead().get_mpz_t());
  if (((n * (n - 1)) / 2) & 1) d = -d;
  return d;
}

}  // namespace arithdyn
