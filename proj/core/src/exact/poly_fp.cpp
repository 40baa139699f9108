#include "arithdyn/exact/poly_fp.hpp"

#include <algorithm>
#include <sstream>

#include "arithdyn/error.hpp"

namespace arithdyn {
namespace {

using u128 = unsigned __int128;

void require_same_field(const PolyFp& a, const PolyFp& b) {
  if (a.modulus() != b.modulus()) {
    throw MathError(Errc::kInvalidArgument, "polynomials over different prime fields");
  }
}

// splitmix64; fixed seed keeps root extraction reproducible.
struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

void split_roots(const PolyFp& g, SplitMix& rng, std::vector<std::uint64_t>& out) {
  const std::uint64_t p = g.modulus();
  const ModP& F = g.field();
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    // g is monic: x + c.
    out.push_back(F.neg(g.coeff(0)));
    return;
  }
  const Integer half = (from_u64(p) - 1) / 2;
  while (true) {
    std::uint64_t a = rng.next() % p;
    PolyFp shift(p, {a, 1});
    PolyFp t = powmod(shift, half, g);
    t -= PolyFp(p, {1});
    PolyFp d = gcd(t, g);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_roots(d, rng, out);
      split_roots(divmod(g, d).first.monic(), rng, out);
      return;
    }
  }
}

}  // namespace

PolyFp::PolyFp(std::uint64_t p, std::vector<std::uint64_t> coeffs) : field_(p), c_(std::move(coeffs)) {
  for (auto& v : c_) v %= p;
  trim();
}

PolyFp PolyFp::from_z(std::uint64_t p, const PolyZ& f) {
  PolyFp r(p);
  r.c_.reserve(f.coeffs().size());
  for (const auto& v : f.coeffs()) r.c_.push_back(r.field_.reduce(v));
  r.trim();
  return r;
}

void PolyFp::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PolyFp PolyFp::monic() const {
  if (is_zero()) return *this;
  std::uint64_t inv = field_.inv(lead());
  PolyFp r = *this;
  for (auto& v : r.c_) v = field_.mul(v, inv);
  return r;
}

PolyFp PolyFp::derivative() const {
  PolyFp r(modulus());
  if (c_.size() <= 1) return r;
  r.c_.resize(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = field_.mul(c_[i], i % modulus());
  r.trim();
  return r;
}

std::uint64_t PolyFp::eval(std::uint64_t x) const {
  std::uint64_t r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = field_.add(field_.mul(r, x), *it);
  return r;
}

PolyFp& PolyFp::operator+=(const PolyFp& o) {
  require_same_field(*this, o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_.add(c_[i], o.c_[i]);
  trim();
  return *this;
}

PolyFp& PolyFp::operator-=(const PolyFp& o) {
  require_same_field(*this, o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_.sub(c_[i], o.c_[i]);
  trim();
  return *this;
}

PolyFp operator*(const PolyFp& a, const PolyFp& b) {
  require_same_field(a, b);
  PolyFp r(a.modulus());
  if (a.is_zero() || b.is_zero()) return r;
  const std::uint64_t p = a.modulus();
  const std::size_t n = a.c_.size(), m = b.c_.size();
  r.c_.assign(n + m - 1, 0);
  if (p < (std::uint64_t{1} << 32)) {
    // Products are below 2^64, so a 128-bit accumulator never overflows.
    for (std::size_t k = 0; k < n + m - 1; ++k) {
      u128 acc = 0;
      std::size_t lo = k >= m ? k - m + 1 : 0;
      std::size_t hi = std::min(k, n - 1);
      for (std::size_t i = lo; i <= hi; ++i) acc += static_cast<u128>(a.c_[i] * b.c_[k - i]);
      r.c_[k] = static_cast<std::uint64_t>(acc % p);
    }
  } else {
    const ModP& F = a.field_;
    for (std::size_t i = 0; i < n; ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) r.c_[i + j] = F.add(r.c_[i + j], F.mul(a.c_[i], b.c_[j]));
    }
  }
  r.trim();
  return r;
}

std::pair<PolyFp, PolyFp> divmod(const PolyFp& a, const PolyFp& b) {
  require_same_field(a, b);
  if (b.is_zero()) throw MathError(Errc::kInvalidArgument, "polynomial division by zero");
  const ModP& F = a.field_;
  PolyFp q(a.modulus()), r = a;
  if (a.degree() < b.degree()) return {q, r};
  const int db = b.degree();
  const std::uint64_t inv_lead = F.inv(b.lead());
  q.c_.assign(static_cast<std::size_t>(a.degree() - db + 1), 0);
  for (int i = a.degree(); i >= db; --i) {
    std::uint64_t coef = r.c_[i];
    if (coef == 0) continue;
    coef = F.mul(coef, inv_lead);
    q.c_[i - db] = coef;
    for (int j = 0; j <= db; ++j) r.c_[i - db + j] = F.sub(r.c_[i - db + j], F.mul(coef, b.c_[j]));
  }
  r.trim();
  q.trim();
  return {q, r};
}

PolyFp operator%(const PolyFp& a, const PolyFp& b) { return divmod(a, b).second; }

PolyFp mulmod(const PolyFp& a, const PolyFp& b, const PolyFp& f) { return (a * b) % f; }

PolyFp powmod(const PolyFp& base, const Integer& e, const PolyFp& f) {
  PolyFp result = PolyFp(f.modulus(), {1}) % f;
  PolyFp b = base % f;
  const std::size_t bits = bit_length(e);
  for (std::size_t i = bits; i-- > 0;) {
    result = mulmod(result, result, f);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mulmod(result, b, f);
  }
  return result;
}

PolyFp gcd(PolyFp a, PolyFp b) {
  require_same_field(a, b);
  while (!b.is_zero()) {
    PolyFp r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

PolyFp poly_mod_pow_x(std::uint64_t p, const PolyFp& f) {
  if (f.modulus() != p) throw MathError(Errc::kInvalidArgument, "modulus mismatch in poly_mod_pow_x");
  if (f.degree() < 1) throw MathError(Errc::kInvalidArgument, "x^p mod f needs deg f >= 1");
  return powmod(PolyFp::x(p), from_u64(p), f);
}

int distinct_root_count(const PolyFp& f) {
  if (f.is_zero()) throw MathError(Errc::kInvalidArgument, "root count of the zero polynomial");
  if (f.degree() == 0) return 0;
  PolyFp h = poly_mod_pow_x(f.modulus(), f);
  h -= PolyFp::x(f.modulus());
  return gcd(h, f).degree();
}

std::vector<std::uint64_t> roots(const PolyFp& f) {
  if (f.is_zero()) throw MathError(Errc::kInvalidArgument, "roots of the zero polynomial");
  std::vector<std::uint64_t> out;
  if (f.degree() == 0) return out;
  const std::uint64_t p = f.modulus();
  if (p == 2) {
    for (std::uint64_t v : {0, 1}) {
      if (f.eval(v) == 0) out.push_back(v);
    }
    return out;
  }
  PolyFp h = poly_mod_pow_x(p, f);
  h -= PolyFp::x(p);
  PolyFp g = gcd(h, f);
  SplitMix rng{0x0123456789abcdefULL ^ p};
  split_roots(g, rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, PolyFp>> distinct_degree_factorization(const PolyFp& f) {
  std::vector<std::pair<int, PolyFp>> out;
  if (f.degree() < 1) return out;
  const std::uint64_t p = f.modulus();
  PolyFp rest = f.monic();
  PolyFp h = PolyFp::x(p) % rest;
  const Integer pz = from_u64(p);
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    h = powmod(h, pz, rest);
    PolyFp g = gcd(h - PolyFp::x(p), rest);
    if (g.degree() > 0) {
      out.emplace_back(d, g);
      rest = divmod(rest, g).first;
      h = h % rest;
    }
  }
  if (rest.degree() > 0) out.emplace_back(rest.degree(), rest);
  return out;
}

bool is_squarefree(const PolyFp& f) {
  if (f.degree() < 1) return true;
  return gcd(f, f.derivative()).degree() == 0;
}

std::string PolyFp::to_string(char var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || c_[i] != 1) os << c_[i];
    if (i > 0) {
      if (c_[i] != 1) os << '*';
      os << var;
      if (i > 1) os << '^' << i;
    }
  }
  return os.str();
}

}  // namespace arithdyn
