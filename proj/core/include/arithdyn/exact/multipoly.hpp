#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "arithdyn/exact/integer.hpp"

namespace arithdyn {

// Sparse polynomial over Z in a fixed number of variables.
class MultiPoly {
 public:
  using Exponents = std::vector<std::uint32_t>;

  explicit MultiPoly(std::size_t nvars = 0) : nvars_(nvars) {}
  static MultiPoly constant(std::size_t nvars, const Integer& c);
  static MultiPoly variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::map<Exponents, Integer>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(const Exponents& e, const Integer& c);
  // Total degree in the given variables, per term; -1 for zero.
  int partial_degree(std::span<const std::size_t> vars, const Exponents& e) const;

  Integer eval(std::span<const Integer> values) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Integer& c);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  std::size_t nvars_;
  std::map<Exponents, Integer> terms_;
};

}  // namespace arithdyn
