#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "arithdyn/density.hpp"
#include "arithdyn/projmap/rational_map.hpp"

namespace arithdyn {

// The orbit of a point visits `tail` transient points, then a cycle of
// length `period`.
struct OrbitShape {
  std::uint64_t tail = 0;
  std::uint64_t period = 1;
  friend bool operator==(const OrbitShape&, const OrbitShape&) = default;
};

// Brent cycle detection; O(tail + period) map applications, O(1) memory.
OrbitShape orbit_shape(const ReducedMap& map, const ProjPointModP& pt);

bool is_periodic_modp(const ReducedMap& map, const ProjPointModP& pt);

// Outcome of a bounded exact orbit computation over Q.
struct RationalOrbit {
  enum class Kind { kPeriodic, kPreperiodic, kUnverified };
  Kind kind = Kind::kUnverified;
  OrbitShape shape;         // meaningful unless kUnverified
  std::size_t steps = 0;    // orbit points computed
  bool height_abort = false;
};

inline constexpr std::size_t kRationalOrbitSteps = 64;
inline constexpr std::size_t kRationalOrbitBits = 4096;

// Follows alpha for at most `steps` applications, stopping once a coordinate
// exceeds `max_bits`. A repeat decides the orbit; otherwise the point is
// treated as wandering and reported kUnverified.
RationalOrbit rational_orbit(const RationalMap& map, const ProjPoint& alpha, std::size_t steps = kRationalOrbitSteps,
                             std::size_t max_bits = kRationalOrbitBits);

struct CertificateEntry {
  std::uint64_t p;
  OrbitShape shape;
};

// Primes where alpha mod p is not periodic, each with its orbit shape.
struct NonPeriodicCertificate {
  RationalMap map;
  ProjPoint alpha;
  std::vector<CertificateEntry> entries;
  // False when the Q-periodicity precheck ended without a repeat.
  bool verified_over_q = false;
};

struct NonPeriodicScan {
  NonPeriodicCertificate certificate;
  DensityEstimate density;
};

// Scans primes in [lo, hi) with good reduction and p > deg. Throws
// MathError(kPeriodicInput) if alpha is periodic over Q within the bound.
NonPeriodicScan nonperiodic_prime_scan(const RationalMap& map, const ProjPoint& alpha, std::uint64_t lo,
                                       std::uint64_t hi, unsigned workers = 0);

// One JSON object per line: {"p":..,"tail":..,"period":..}.
void write_certificate_jsonl(std::ostream& out, const NonPeriodicCertificate& cert);

inline constexpr std::uint64_t kCensusMaxModulus = 1000000;

// Full classification of the functional graph z -> phi_p(z) on P^1(F_p).
// Points are labelled by ProjPointModP::index.
struct FunctionalGraphCensus {
  std::uint64_t p = 0;
  std::vector<std::uint32_t> image;
  std::vector<std::uint32_t> preimage_count;
  std::vector<std::uint8_t> on_cycle;
  std::map<std::uint64_t, std::uint64_t> cycles;  // length -> number of cycles
  std::uint64_t cyclic_points = 0;
  std::uint64_t tree_points = 0;
};

// Throws MathError(kModulusTooLarge) for p > 10^6.
FunctionalGraphCensus functional_graph_census(const ReducedMap& map);

}  // namespace arithdyn
