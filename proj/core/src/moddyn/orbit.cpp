#include "arithdyn/moddyn/orbit.hpp"

#include <nlohmann/json.hpp>
#include <ostream>

#include "arithdyn/error.hpp"
#include "arithdyn/exact/primes.hpp"
#include "arithdyn/parallel.hpp"

namespace arithdyn {

OrbitShape orbit_shape(const ReducedMap& map, const ProjPointModP& pt) {
  // Brent: find the period with a power-of-two window, then the tail with two
  // pointers a period apart.
  std::uint64_t power = 1, lam = 1;
  ProjPointModP tortoise = pt, hare = apply(map, pt);
  while (!(tortoise == hare)) {
    if (power == lam) {
      tortoise = hare;
      power <<= 1;
      lam = 0;
    }
    hare = apply(map, hare);
    ++lam;
  }
  ProjPointModP a = pt, b = pt;
  for (std::uint64_t i = 0; i < lam; ++i) b = apply(map, b);
  std::uint64_t mu = 0;
  while (!(a == b)) {
    a = apply(map, a);
    b = apply(map, b);
    ++mu;
  }
  return {mu, lam};
}

bool is_periodic_modp(const ReducedMap& map, const ProjPointModP& pt) { return orbit_shape(map, pt).tail == 0; }

RationalOrbit rational_orbit(const RationalMap& map, const ProjPoint& alpha, std::size_t steps,
                             std::size_t max_bits) {
  RationalOrbit out;
  std::vector<ProjPoint> seen{alpha};
  std::map<ProjPoint, std::size_t> index{{alpha, 0}};
  ProjPoint cur = alpha;
  for (std::size_t k = 1; k <= steps; ++k) {
    cur = apply(map, cur);
    out.steps = k;
    auto it = index.find(cur);
    if (it != index.end()) {
      out.shape = {it->second, k - it->second};
      out.kind = it->second == 0 ? RationalOrbit::Kind::kPeriodic : RationalOrbit::Kind::kPreperiodic;
      return out;
    }
    if (bit_length(cur.x()) > max_bits || bit_length(cur.y()) > max_bits) {
      out.height_abort = true;
      return out;
    }
    index.emplace(cur, k);
  }
  return out;
}

NonPeriodicScan nonperiodic_prime_scan(const RationalMap& map, const ProjPoint& alpha, std::uint64_t lo,
                                       std::uint64_t hi, unsigned workers) {
  RationalOrbit q = rational_orbit(map, alpha);
  if (q.kind == RationalOrbit::Kind::kPeriodic) {
    throw MathError(Errc::kPeriodicInput, "point " + alpha.to_string() + " is periodic under " + map.to_string() +
                                              " with period " + std::to_string(q.shape.period) +
                                              "; a non-periodic point is required");
  }
  std::vector<std::uint64_t> primes = prime_range(std::max<std::uint64_t>(lo, map.degree() + 1), std::max(lo, hi));
  std::vector<std::int8_t> eligible(primes.size(), 0);
  std::vector<OrbitShape> shapes(primes.size());
  constexpr std::size_t kChunk = 256;
  const std::size_t nchunks = (primes.size() + kChunk - 1) / kChunk;
  parallel_for(nchunks, workers, [&](std::size_t c) {
    for (std::size_t i = c * kChunk; i < std::min(primes.size(), (c + 1) * kChunk); ++i) {
      if (!good_reduction(map, primes[i])) continue;
      ReducedMap r = reduce_map(map, primes[i]);
      eligible[i] = 1;
      shapes[i] = orbit_shape(r, reduce_point(alpha, primes[i]));
    }
  });
  NonPeriodicScan out{{map, alpha, {}, q.kind == RationalOrbit::Kind::kPreperiodic}, {}};
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!eligible[i]) continue;
    ++n;
    if (shapes[i].tail >= 1) out.certificate.entries.push_back({primes[i], shapes[i]});
  }
  out.density = make_density(out.certificate.entries.size(), n);
  return out;
}

void write_certificate_jsonl(std::ostream& out, const NonPeriodicCertificate& cert) {
  for (const auto& e : cert.entries) {
    nlohmann::ordered_json j;
    j["p"] = e.p;
    j["tail"] = e.shape.tail;
    j["period"] = e.shape.period;
    out << j.dump() << '\n';
  }
}

FunctionalGraphCensus functional_graph_census(const ReducedMap& map) {
  const std::uint64_t p = map.modulus();
  if (p > kCensusMaxModulus) {
    throw MathError(Errc::kModulusTooLarge,
                    "census enumerates P^1(F_p); p = " + std::to_string(p) + " exceeds " +
                        std::to_string(kCensusMaxModulus));
  }
  const std::size_t n = p + 1;
  FunctionalGraphCensus c;
  c.p = p;
  c.image.resize(n);
  c.preimage_count.assign(n, 0);
  c.on_cycle.assign(n, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    c.image[i] = static_cast<std::uint32_t>(apply(map, ProjPointModP::from_index(i, p)).index(p));
    ++c.preimage_count[c.image[i]];
  }
  // 0 unvisited, 1 on the current path, 2 finished.
  std::vector<std::uint8_t> state(n, 0);
  std::vector<std::uint32_t> path;
  for (std::uint64_t s = 0; s < n; ++s) {
    if (state[s]) continue;
    path.clear();
    std::uint32_t z = static_cast<std::uint32_t>(s);
    while (state[z] == 0) {
      state[z] = 1;
      path.push_back(z);
      z = c.image[z];
    }
    if (state[z] == 1) {
      std::uint64_t len = 0;
      std::uint32_t w = z;
      do {
        c.on_cycle[w] = 1;
        w = c.image[w];
        ++len;
      } while (w != z);
      ++c.cycles[len];
      c.cyclic_points += len;
    }
    for (std::uint32_t v : path) state[v] = 2;
  }
  c.tree_points = n - c.cyclic_points;
  return c;
}

}  // namespace arithdyn
