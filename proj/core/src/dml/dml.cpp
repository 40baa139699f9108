#include "arithdyn/dml/dml.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "arithdyn/exact/parse.hpp"
#include "arithdyn/exact/primes.hpp"
#include "arithdyn/parallel.hpp"

namespace arithdyn {

SplitSystem::SplitSystem(std::vector<RationalMap> m, std::vector<ProjPoint> s) : maps(std::move(m)), start(std::move(s)) {
  if (maps.empty()) throw MathError(Errc::kInvalidArgument, "split system needs at least one map");
  if (maps.size() != start.size()) {
    throw MathError(Errc::kInvalidArgument, std::to_string(maps.size()) + " maps but " +
                                                std::to_string(start.size()) + " start coordinates");
  }
}

std::vector<std::string> Subvariety::variable_names(std::size_t g) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= g; ++i) {
    names.push_back("X" + std::to_string(i));
    names.push_back("Y" + std::to_string(i));
  }
  return names;
}

Subvariety::Subvariety(std::size_t g, std::vector<MultiPoly> equations) : g_(g), equations_(std::move(equations)) {
  const auto names = variable_names(g_);
  for (const auto& eq : equations_) {
    if (eq.nvars() != 2 * g_) throw ParseError("equation has the wrong number of variables");
    for (std::size_t i = 0; i < g_; ++i) {
      std::set<std::uint32_t> degrees;
      for (const auto& [e, c] : eq.terms()) degrees.insert(e[2 * i] + e[2 * i + 1]);
      if (degrees.size() > 1) {
        throw ParseError("equation " + eq.to_string(names) + " is not homogeneous in (" + names[2 * i] + ", " +
                         names[2 * i + 1] + ")");
      }
    }
  }
}

Subvariety Subvariety::parse(std::string_view text, std::size_t g) {
  const auto names = variable_names(g);
  std::vector<MultiPoly> eqs;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string_view::npos) {
      eqs.push_back(parse_multipoly(t, names));
    } else {
      eqs.push_back(parse_multipoly(t.substr(0, eq), names) - parse_multipoly(t.substr(eq + 1), names));
    }
  }
  if (eqs.empty()) throw ParseError("subvariety has no equations");
  return Subvariety(g, std::move(eqs));
}

bool Subvariety::contains(const std::vector<ProjPoint>& pt) const {
  std::vector<Integer> values;
  for (const auto& c : pt) {
    values.push_back(c.x());
    values.push_back(c.y());
  }
  for (const auto& eq : equations_) {
    if (sgn(eq.eval(values)) != 0) return false;
  }
  return true;
}

HeightOverflowError::HeightOverflowError(std::size_t index, std::vector<std::uint64_t> partial)
    : MathError(Errc::kHeightOverflow, "orbit coordinates exceed the exact-arithmetic height cap at index " +
                                           std::to_string(index)),
      index_(index),
      partial_(std::move(partial)) {}

std::vector<std::uint64_t> orbit_membership_scan(const SplitSystem& sys, const Subvariety& V, std::uint64_t N,
                                                 std::size_t height_cap_bits) {
  if (V.dimension() != sys.dimension()) throw MathError(Errc::kInvalidArgument, "subvariety dimension mismatch");
  std::vector<std::uint64_t> S;
  std::vector<ProjPoint> pt = sys.start;
  for (std::uint64_t n = 0; n <= N; ++n) {
    if (n > 0) {
      for (std::size_t i = 0; i < pt.size(); ++i) pt[i] = apply(sys.maps[i], pt[i]);
    }
    for (const auto& c : pt) {
      if (bit_length(c.x()) > height_cap_bits || bit_length(c.y()) > height_cap_bits) {
        throw HeightOverflowError(n, std::move(S));
      }
    }
    if (V.contains(pt)) S.push_back(n);
  }
  return S;
}

bool ProgressionCover::contains(std::uint64_t n) const {
  if (n < onset) return std::binary_search(exceptional.begin(), exceptional.end(), n);
  for (const auto& [k, l] : progressions) {
    if (n % k == l) return true;
  }
  return false;
}

FitFailureError::FitFailureError(std::uint64_t N, std::vector<std::uint64_t> S)
    : MathError(Errc::kFitFailure, "no period k <= " + std::to_string(N / 4) + " with onset <= " +
                                       std::to_string(N / 2) + " fits the " + std::to_string(S.size()) +
                                       " indices in [0, " + std::to_string(N) + "]"),
      s_(std::move(S)) {}

ProgressionCover fit_progressions(const std::vector<std::uint64_t>& S, std::uint64_t N) {
  std::vector<std::uint8_t> ind(N + 1, 0);
  for (std::uint64_t n : S) {
    if (n > N) throw MathError(Errc::kInvalidArgument, "index " + std::to_string(n) + " beyond horizon");
    ind[n] = 1;
  }
  for (std::uint64_t k = 1; k <= N / 4; ++k) {
    // The last violation of ind(n) = ind(n + k) fixes the smallest onset.
    std::uint64_t M = 0;
    for (std::uint64_t n = N - k + 1; n-- > 0;) {
      if (ind[n] != ind[n + k]) {
        M = n + 1;
        break;
      }
    }
    if (M > N / 2) continue;
    ProgressionCover c;
    c.horizon = N;
    c.onset = M;
    c.period = k;
    for (std::uint64_t n : S) {
      if (n < M) c.exceptional.push_back(n);
    }
    std::sort(c.exceptional.begin(), c.exceptional.end());
    c.exceptional.erase(std::unique(c.exceptional.begin(), c.exceptional.end()), c.exceptional.end());
    for (std::uint64_t l = 0; l < k; ++l) {
      // First index >= M in this residue class.
      std::uint64_t n = M + (l + k - M % k) % k;
      if (n <= N && ind[n]) c.progressions.emplace_back(k, l);
    }
    return c;
  }
  throw FitFailureError(N, S);
}

void write_cover_json(std::ostream& out, const ProgressionCover& cover) {
  nlohmann::ordered_json j;
  j["M"] = cover.onset;
  j["N"] = cover.horizon;
  j["k"] = cover.period;
  j["exceptional"] = cover.exceptional;
  nlohmann::ordered_json prog = nlohmann::ordered_json::array();
  for (const auto& [k, l] : cover.progressions) prog.push_back({k, l});
  j["progressions"] = prog;
  out << j.dump() << '\n';
}

namespace {

bool contains_point(const std::vector<ProjPointModP>& v, const ProjPointModP& z) {
  return std::find(v.begin(), v.end(), z) != v.end();
}

// Certificate data at p, or nothing if p fails for some coordinate.
std::optional<PadicCertificate> try_prime(const SplitSystem& sys, std::uint64_t p, CertificateMode mode) {
  PadicCertificate cert{p, mode, {}};
  for (std::size_t i = 0; i < sys.dimension(); ++i) {
    const RationalMap& map = sys.maps[i];
    if (p <= static_cast<std::uint64_t>(2 * map.degree()) || !good_reduction(map, p)) return std::nullopt;
    ReducedMap r = reduce_map(map, p);
    PadicCoordinate coord{orbit_shape(r, reduce_point(sys.start[i], p)), critical_points_modp(r)};
    ProjPointModP z = reduce_point(sys.start[i], p);
    for (std::uint64_t s = 0; s < coord.shape.tail + coord.shape.period; ++s) {
      bool in_cycle = s >= coord.shape.tail;
      if ((mode == CertificateMode::kStrict || in_cycle) && contains_point(coord.critical, z)) return std::nullopt;
      z = apply(r, z);
    }
    cert.coordinates.push_back(std::move(coord));
  }
  return cert;
}

}  // namespace

PadicCertificate find_padic_certificate(const SplitSystem& sys, std::uint64_t pmin, std::uint64_t pmax,
                                        CertificateMode mode, unsigned workers) {
  for (std::size_t i = 0; i < sys.dimension(); ++i) {
    RationalOrbit q = rational_orbit(sys.maps[i], sys.start[i]);
    if (q.kind != RationalOrbit::Kind::kUnverified) {
      throw MathError(Errc::kPreperiodicInput, "start coordinate " + std::to_string(i + 1) + " (" +
                                                   sys.start[i].to_string() + ") is preperiodic under " +
                                                   sys.maps[i].to_string() + " with tail " +
                                                   std::to_string(q.shape.tail) + " and period " +
                                                   std::to_string(q.shape.period));
    }
  }
  std::vector<std::uint64_t> primes = pmax < pmin ? std::vector<std::uint64_t>{} : prime_range(pmin, pmax + 1);
  constexpr std::size_t kBlock = 64;
  for (std::size_t base = 0; base < primes.size(); base += kBlock) {
    const std::size_t len = std::min(kBlock, primes.size() - base);
    std::vector<std::optional<PadicCertificate>> found(len);
    parallel_for(len, workers, [&](std::size_t t) { found[t] = try_prime(sys, primes[base + t], mode); });
    for (auto& f : found) {
      if (f) return std::move(*f);
    }
  }
  throw MathError(Errc::kNoCertificateFound, "no certifying prime in [" + std::to_string(pmin) + ", " +
                                                 std::to_string(pmax) + "]; the search is not a refutation");
}

bool verify_padic_certificate(const SplitSystem& sys, const PadicCertificate& cert) {
  if (!is_prime(cert.p) || cert.coordinates.size() != sys.dimension()) return false;
  auto again = try_prime(sys, cert.p, cert.mode);
  if (!again) return false;
  for (std::size_t i = 0; i < sys.dimension(); ++i) {
    if (!(again->coordinates[i].shape == cert.coordinates[i].shape)) return false;
  }
  return true;
}

NormalizedSystem fixed_point_normalize(const SplitSystem& sys, const std::vector<std::optional<CycleData>>& data,
                                       int cap) {
  if (data.size() != sys.dimension()) throw MathError(Errc::kInvalidArgument, "cycle data size mismatch");
  std::uint64_t A = 0, B = 1;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data[i]) continue;
    const auto [a, b] = *data[i];
    if (b == 0) throw MathError(Errc::kInvalidCycleData, "cycle length must be positive");
    ProjPoint y = sys.start[i];
    for (std::uint64_t s = 0; s < a; ++s) y = apply(sys.maps[i], y);
    ProjPoint z = y;
    for (std::uint64_t s = 1; s <= b; ++s) {
      z = apply(sys.maps[i], z);
      if (z == y && s < b) {
        throw MathError(Errc::kInvalidCycleData, "coordinate " + std::to_string(i + 1) + " returns after " +
                                                     std::to_string(s) + " steps, not " + std::to_string(b));
      }
    }
    if (!(z == y)) {
      throw MathError(Errc::kInvalidCycleData, "phi^" + std::to_string(a) + "(x_" + std::to_string(i + 1) +
                                                   ") is not on a cycle of length " + std::to_string(b));
    }
    A = std::max(A, a);
    B = std::lcm(B, b);
  }
  NormalizedSystem out;
  out.offset = A;
  out.stride = B;
  std::vector<RationalMap> maps;
  for (const auto& m : sys.maps) maps.push_back(B == 1 ? m : iterate(m, static_cast<int>(B), cap));
  std::vector<ProjPoint> starts = sys.start;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    for (std::uint64_t s = 0; s < A; ++s) starts[i] = apply(sys.maps[i], starts[i]);
  }
  for (std::uint64_t r = 0; r < B; ++r) {
    out.subsystems.emplace_back(maps, starts);
    for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = apply(sys.maps[i], starts[i]);
  }
  return out;
}

}  // namespace arithdyn
