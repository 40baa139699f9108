#pragma once

#include <cstdint>
#include <string>

#include "arithdyn/exact/integer.hpp"

namespace arithdyn {

// Two-sided 99% normal quantile.
inline constexpr double kWilson99Z = 2.5758293035489004;

// hits out of eligible trials with a Wilson score interval.
struct DensityEstimate {
  std::uint64_t hits = 0;
  std::uint64_t eligible = 0;
  Rational proportion;  // 0 when eligible == 0
  double wilson99_lo = 0.0;
  double wilson99_hi = 1.0;

  double value() const { return proportion.get_d(); }
};

DensityEstimate make_density(std::uint64_t hits, std::uint64_t eligible);

// Wilson interval at quantile z; [0, 1] for an empty sample.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t n, double z = kWilson99Z);

}  // namespace arithdyn
