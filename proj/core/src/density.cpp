#include "arithdyn/density.hpp"

#include <algorithm>
#include <cmath>

#include "arithdyn/error.hpp"

namespace arithdyn {

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (ph + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

DensityEstimate make_density(std::uint64_t hits, std::uint64_t eligible) {
  if (hits > eligible) throw MathError(Errc::kInvalidArgument, "more hits than eligible trials");
  DensityEstimate d;
  d.hits = hits;
  d.eligible = eligible;
  if (eligible > 0) {
    d.proportion = Rational(from_u64(hits), from_u64(eligible));
    d.proportion.canonicalize();
  }
  std::tie(d.wilson99_lo, d.wilson99_hi) = wilson_interval(hits, eligible);
  return d;
}

}  // namespace arithdyn
