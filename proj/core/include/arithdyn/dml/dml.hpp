#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arithdyn/error.hpp"
#include "arithdyn/exact/multipoly.hpp"
#include "arithdyn/moddyn/orbit.hpp"

namespace arithdyn {

// Phi = (phi_1, ..., phi_g) acting coordinatewise on (P^1)^g, with a start point.
struct SplitSystem {
  std::vector<RationalMap> maps;
  std::vector<ProjPoint> start;

  // Throws MathError(kInvalidArgument) unless 1 <= g == start.size().
  SplitSystem(std::vector<RationalMap> maps, std::vector<ProjPoint> start);
  std::size_t dimension() const noexcept { return maps.size(); }
};

// Closed subvariety of (P^1)^g cut out by forms that are homogeneous in each
// pair (X_i, Y_i). Variables are ordered X1, Y1, ..., Xg, Yg.
class Subvariety {
 public:
  // Throws ParseError if an equation is not multihomogeneous.
  Subvariety(std::size_t g, std::vector<MultiPoly> equations);

  // One equation per line in X1, Y1, ..., Xg, Yg; `lhs = rhs` is read as
  // lhs - rhs. Blank lines and lines starting with '#' are skipped.
  static Subvariety parse(std::string_view text, std::size_t g);
  static std::vector<std::string> variable_names(std::size_t g);

  std::size_t dimension() const noexcept { return g_; }
  const std::vector<MultiPoly>& equations() const noexcept { return equations_; }
  bool contains(const std::vector<ProjPoint>& pt) const;

 private:
  std::size_t g_;
  std::vector<MultiPoly> equations_;
};

// About 10^6 decimal digits.
inline constexpr std::size_t kHeightCapBits = 3321929;

class HeightOverflowError : public MathError {
 public:
  HeightOverflowError(std::size_t index, std::vector<std::uint64_t> partial);
  // Orbit index whose coordinates crossed the cap; `partial` covers [0, index).
  std::size_t index() const noexcept { return index_; }
  const std::vector<std::uint64_t>& partial() const noexcept { return partial_; }

 private:
  std::size_t index_;
  std::vector<std::uint64_t> partial_;
};

// {n in [0, N] : Phi^n(start) in V}, computed exactly.
std::vector<std::uint64_t> orbit_membership_scan(const SplitSystem& sys, const Subvariety& V, std::uint64_t N,
                                                 std::size_t height_cap_bits = kHeightCapBits);

// The indicator of S is k-periodic on [M, N]; below M only the exceptional
// indices remain. Progression (k, l) stands for {n >= M : n = l mod k}.
struct ProgressionCover {
  std::vector<std::uint64_t> exceptional;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> progressions;
  std::uint64_t horizon = 0;  // N
  std::uint64_t onset = 0;    // M
  std::uint64_t period = 1;   // k

  bool contains(std::uint64_t n) const;
};

class FitFailureError : public MathError {
 public:
  FitFailureError(std::uint64_t N, std::vector<std::uint64_t> S);
  const std::vector<std::uint64_t>& indices() const noexcept { return s_; }

 private:
  std::vector<std::uint64_t> s_;
};

// Smallest k <= N/4, then smallest M <= N/2, with the indicator of S
// k-periodic on [M, N]. Throws FitFailureError (carrying S) if none exists.
ProgressionCover fit_progressions(const std::vector<std::uint64_t>& S, std::uint64_t N);

// {"M":..,"exceptional":[..],"progressions":[[k,l],..]}
void write_cover_json(std::ostream& out, const ProgressionCover& cover);

enum class CertificateMode {
  kStrict,   // the whole orbit mod p avoids the critical points
  kRelaxed,  // the cycle reached mod p contains no critical point
};

struct PadicCoordinate {
  OrbitShape shape;
  std::vector<ProjPointModP> critical;
};

struct PadicCertificate {
  std::uint64_t p = 0;
  CertificateMode mode = CertificateMode::kStrict;
  std::vector<PadicCoordinate> coordinates;
};

// Smallest prime p in [pmin, pmax] such that for every i the map has good
// reduction, p > 2 deg phi_i and the orbit of x_i mod p avoids the critical
// points in the chosen mode. Start points found preperiodic over Q raise
// MathError(kPreperiodicInput); an exhausted window raises kNoCertificateFound.
PadicCertificate find_padic_certificate(const SplitSystem& sys, std::uint64_t pmin, std::uint64_t pmax,
                                        CertificateMode mode = CertificateMode::kStrict, unsigned workers = 0);

inline PadicCertificate find_padic_certificate(const SplitSystem& sys, std::uint64_t pmax) {
  return find_padic_certificate(sys, 2, pmax);
}

// Re-derives the certificate conditions at cert.p from scratch.
bool verify_padic_certificate(const SplitSystem& sys, const PadicCertificate& cert);

// phi^a(x) enters a cycle of exact length b.
struct CycleData {
  std::uint64_t a = 0;
  std::uint64_t b = 1;
};

// With A = max a_i and B = lcm b_i over the flagged coordinates, subsystem r
// (0 <= r < B) has maps phi_i^B and starts phi_i^(A + r)(x_i); its index n is
// the original index A + r + B n. Indices below A are not covered.
struct NormalizedSystem {
  std::vector<SplitSystem> subsystems;
  std::uint64_t offset = 0;  // A
  std::uint64_t stride = 1;  // B

  std::uint64_t original_index(std::size_t r, std::uint64_t n) const { return offset + r + stride * n; }
};

// Throws MathError(kInvalidCycleData) if some supplied (a, b) is wrong.
NormalizedSystem fixed_point_normalize(const SplitSystem& sys, const std::vector<std::optional<CycleData>>& data,
                                       int cap = kIterateDegreeCap);

}  // namespace arithdyn
