#pragma once

#include <cstdint>

#include "arithdyn/exact/integer.hpp"

namespace arithdyn {

// Largest supported prime modulus; products of two residues fit in 128 bits.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

// Arithmetic in Z/pZ on machine residues in [0, p).
class ModP {
 public:
  explicit ModP(std::uint64_t p);

  std::uint64_t modulus() const noexcept { return p_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept;
  // Throws MathError(kInvalidArgument) on a == 0.
  std::uint64_t inv(std::uint64_t a) const;

  std::uint64_t reduce(std::int64_t v) const noexcept;
  std::uint64_t reduce(const Integer& v) const { return mod_u64(v, p_); }

 private:
  std::uint64_t p_;
};

}  // namespace arithdyn
