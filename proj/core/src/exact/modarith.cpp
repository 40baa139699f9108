#include "arithdyn/exact/modarith.hpp"

#include "arithdyn/error.hpp"

namespace arithdyn {

ModP::ModP(std::uint64_t p) : p_(p) {
  if (p < 2 || p > kMaxModulus) {
    throw MathError(Errc::kModulusTooLarge, "modulus " + std::to_string(p) + " outside [2, 2^62]");
  }
}

std::uint64_t ModP::pow(std::uint64_t a, std::uint64_t e) const noexcept {
  std::uint64_t result = 1 % p_;
  a %= p_;
  while (e != 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

std::uint64_t ModP::inv(std::uint64_t a) const {
  // Extended Euclid on signed 128-bit to stay exact for moduli up to 2^62.
  __int128 t = 0, new_t = 1;
  __int128 r = p_, new_r = a % p_;
  if (new_r == 0) throw MathError(Errc::kInvalidArgument, "inverse of zero modulo " + std::to_string(p_));
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw MathError(Errc::kInvalidArgument, "non-invertible residue modulo " + std::to_string(p_));
  if (t < 0) t += p_;
  return static_cast<std::uint64_t>(t);
}

std::uint64_t ModP::reduce(std::int64_t v) const noexcept {
  __int128 r = static_cast<__int128>(v) % static_cast<__int128>(p_);
  if (r < 0) r += p_;
  return static_cast<std::uint64_t>(r);
}

}  // namespace arithdyn
