#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "arithdyn/exact/integer.hpp"
#include "arithdyn/exact/modarith.hpp"

namespace arithdyn {

// A point (x : y) of P^1(Q) with gcd(x, y) = 1 and either y > 0 or (1 : 0).
class ProjPoint {
 public:
  // Canonicalizes; throws MathError(kInvalidArgument) on (0 : 0).
  ProjPoint(Integer x, Integer y);
  explicit ProjPoint(const Rational& q) : ProjPoint(q.get_num(), q.get_den()) {}
  static ProjPoint infinity() { return ProjPoint(Integer(1), Integer(0)); }

  const Integer& x() const noexcept { return x_; }
  const Integer& y() const noexcept { return y_; }
  bool is_infinity() const noexcept { return sgn(y_) == 0; }
  Rational affine() const;  // requires !is_infinity()

  // "a", "a/b" or "inf".
  static ProjPoint parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.x_ == b.x_ && a.y_ == b.y_; }
  friend std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b);

 private:
  Integer x_;
  Integer y_;
};

// A point of P^1(F_p): (x : 1) or (1 : 0).
struct ProjPointModP {
  std::uint64_t x = 0;
  std::uint64_t y = 1;

  static ProjPointModP affine(std::uint64_t v) { return {v, 1}; }
  static ProjPointModP infinity() { return {1, 0}; }
  // Canonical form of (x : y); throws MathError(kInvalidArgument) on (0 : 0).
  static ProjPointModP make(std::uint64_t x, std::uint64_t y, const ModP& f);

  bool is_infinity() const noexcept { return y == 0; }
  // Dense labels 0..p with p standing for infinity.
  std::uint64_t index(std::uint64_t p) const noexcept { return is_infinity() ? p : x; }
  static ProjPointModP from_index(std::uint64_t i, std::uint64_t p) { return i == p ? infinity() : affine(i); }

  std::string to_string() const;

  friend bool operator==(const ProjPointModP&, const ProjPointModP&) = default;
  friend auto operator<=>(const ProjPointModP&, const ProjPointModP&) = default;
};

ProjPointModP reduce_point(const ProjPoint& pt, std::uint64_t p);

}  // namespace arithdyn
