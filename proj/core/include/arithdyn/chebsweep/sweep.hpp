#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "arithdyn/chebsweep/iterate_poly.hpp"
#include "arithdyn/density.hpp"

namespace arithdyn {

struct TargetEntry {
  RationalMap map;
  std::vector<ProjPoint> targets;
};

// Maps with their targets at a common level m. Targets are deduplicated in
// first-seen order. Construction rejects an empty system
// (MathError kEmptySystem), d^m above the cap (kDegreeCapExceeded) and targets
// that are periodic over Q within the bounded check (kPeriodicInput).
class TargetSystem {
 public:
  TargetSystem(std::vector<TargetEntry> entries, int level, int cap = kIterateDegreeCap);

  const std::vector<TargetEntry>& entries() const noexcept { return entries_; }
  int level() const noexcept { return level_; }
  int cap() const noexcept { return cap_; }
  std::size_t target_count() const noexcept { return polys_.size(); }
  int max_degree() const noexcept { return max_degree_; }
  // Iterate polynomials in (map, target) order.
  const std::vector<IteratePoly>& polys() const noexcept { return polys_; }
  // Entry index of each flattened target, and its "i.j" label (1-based).
  const std::vector<std::size_t>& owner() const noexcept { return owner_; }
  std::vector<std::string> labels() const;

  // level=m;map=...;targets=...|map=...;targets=...
  std::string canonical_text() const;
  // 64-bit FNV-1a of canonical_text, as 16 hex digits.
  std::string hash() const;

 private:
  std::vector<TargetEntry> entries_;
  int level_;
  int cap_;
  int max_degree_ = 0;
  std::vector<IteratePoly> polys_;
  std::vector<std::size_t> owner_;
};

struct Augmentation {
  std::size_t entry;   // map index i
  std::size_t target;  // target index j within the entry
  int r;               // append phi_i^r(alpha_ij)
};

// Throws MathError(kDegreeCapExceeded) when d_i^r exceeds the system cap.
TargetSystem augment_targets(const TargetSystem& sys, const std::vector<Augmentation>& additions);

std::uint64_t fnv1a64(std::string_view data);

// One eligible prime: all maps have good reduction, p > max degree and p is
// not bad for any iterate polynomial.
struct SweepRecord {
  std::uint64_t p = 0;
  std::vector<std::uint32_t> root_counts;  // affine counts, flattened targets
  std::vector<std::uint8_t> inf_flags;
  bool derangement = false;
  bool infinity_hit = false;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

bool prime_eligible(const TargetSystem& sys, std::uint64_t p);
SweepRecord sweep_prime(const TargetSystem& sys, std::uint64_t p);

inline constexpr int kSweepSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultChunkWidth = std::uint64_t{1} << 15;

struct SweepOptions {
  unsigned workers = 0;
  // Primes are processed in blocks [k W, (k + 1) W) clipped to the range.
  std::uint64_t chunk_width = kDefaultChunkWidth;
  // Append-only JSONL cache of finished chunks; empty disables caching.
  std::filesystem::path cache_file;
  // Stop after computing this many chunks that were not cached.
  std::optional<std::size_t> max_new_chunks;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // ascending p
  DensityEstimate density;           // derangements over eligible primes
  std::size_t chunks_total = 0;
  std::size_t chunks_cached = 0;
  std::size_t chunks_computed = 0;
  bool complete = true;
};

// Sweeps the primes in [lo, hi). Output is independent of the worker count
// and of how the work was split between runs through the cache.
SweepResult sweep(const TargetSystem& sys, std::uint64_t lo, std::uint64_t hi, const SweepOptions& opts = {});

// Throws MathError(kEmptySystem) if no prime in the range is eligible.
DensityEstimate derangement_density(const TargetSystem& sys, std::uint64_t lo, std::uint64_t hi,
                                    unsigned workers = 0);

// p,r1.1,...,inf_flags,derangement
void write_sweep_csv(std::ostream& out, const TargetSystem& sys, const std::vector<SweepRecord>& records);

// Finite-level independence diagnostic for the per-target no-root events.
struct IndependenceReport {
  std::vector<std::string> labels;
  std::uint64_t eligible = 0;
  std::vector<double> marginals;  // P(target has no preimage mod p)
  double joint = 0.0;             // P(no target has one)
  double product = 0.0;           // product of the marginals
  std::optional<double> ratio;    // joint / product when product > 0
  double chi_square = 0.0;        // against the product distribution on 2^k cells
  int dof = 0;
  std::vector<std::uint64_t> cells;  // bit j set = target j has no root
};

inline constexpr std::uint64_t kIndependenceMinPrimes = 100;
inline constexpr std::size_t kIndependenceMaxTargets = 16;

// Throws MathError(kInsufficientData) with fewer than 2 targets or fewer than
// 100 eligible primes.
IndependenceReport independence_report(const TargetSystem& sys, std::uint64_t lo, std::uint64_t hi,
                                       unsigned workers = 0);

}  // namespace arithdyn
