#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "arithdyn/chebsweep/sweep.hpp"

namespace arithdyn {

struct ForestNode {
  ProjPointModP point;
  std::int64_t parent = -1;  // index into the previous level; -1 at the root
};

// Iterated preimages of one target: levels[k] holds every z in P^1(F_p) with
// phi_p^k(z) = target, each linked to phi_p(z) on level k - 1.
struct PreimageTree {
  std::size_t entry = 0;
  std::size_t target = 0;
  std::vector<std::vector<ForestNode>> levels;
};

struct PreimageForestModP {
  std::uint64_t p = 0;
  int depth = 0;
  std::vector<PreimageTree> trees;  // one per (map, target), system order
};

// Throws MathError(kBadPrime) if some map has bad reduction at p or p <= deg,
// and MathError(kModulusTooLarge) for p > 10^6.
PreimageForestModP build_forest_modp(const TargetSystem& sys, std::uint64_t p, int depth);

// Number of F_p-rational nodes at `level` in each tree.
std::vector<std::uint64_t> frobenius_fixed_count(const PreimageForestModP& forest, int level);

// {"p":..,"depth":..,"trees":[{"map":..,"target":..,"levels":[[{"value":..,"parent_index":..}]]}]}
void write_forest_json(std::ostream& out, const TargetSystem& sys, const PreimageForestModP& forest);

// One `child parent` line per edge; nodes are named t<tree>:<level>:<value>.
void write_forest_edges(std::ostream& out, const PreimageForestModP& forest);

inline constexpr int kPostcriticalDefaultBound = 16;
inline constexpr long kPostcriticalDegreeCap = 65536;

struct PostcriticalReport {
  // True when alpha is not phi^k(c) for any critical point c and 1 <= k <= bound.
  bool clean = true;
  int bound = 0;
  std::optional<int> step;  // smallest k with alpha = phi^k(c)
};

// Tracks the binary form whose zeros are the k-th images of the critical
// points. Its degree stays 2d - 2; only coefficient size grows, so the bound
// is limited by d^bound <= 65536 (MathError kDegreeCapExceeded).
PostcriticalReport postcritical_check(const RationalMap& map, const ProjPoint& alpha,
                                      int bound = kPostcriticalDefaultBound);

// The form of degree 2d - 2 vanishing exactly on phi^k(critical points).
BinaryForm critical_image_form(const RationalMap& map, int k);

// Res of binary forms with formal degrees (A.degree, B.degree).
Integer form_resultant(const BinaryForm& A, const BinaryForm& B);

}  // namespace arithdyn
