#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>
#include <fstream>
#include <unistd.h>

#include "arithdyn/chebsweep/sweep.hpp"
#include "arithdyn/error.hpp"
#include "arithdyn/exact/primes.hpp"
#include "arithdyn/moddyn/orbit.hpp"
#include "oracles.hpp"

namespace arithdyn {
namespace {

RationalMap M(const char* s) { return RationalMap::parse(s); }
ProjPoint P(const char* s) { return ProjPoint::parse(s); }

TargetSystem system_of(const char* map, std::vector<const char*> targets, int level) {
  std::vector<ProjPoint> pts;
  for (const char* t : targets) pts.push_back(P(t));
  return TargetSystem({{M(map), pts}}, level);
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const MathError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no MathError thrown";
  return Errc::kInvalidArgument;
}

bool is_qr(std::uint64_t a, std::uint64_t p) {
  for (std::uint64_t y = 1; y < p; ++y) {
    if (y * y % p == a % p) return true;
  }
  return false;
}

TEST(IteratePoly, Examples) {
  EXPECT_EQ(build_iterate_poly(M("x^2"), P("3"), 1).f, PolyZ({-3, 0, 1}));
  EXPECT_EQ(build_iterate_poly(M("x^2"), P("3"), 2).f, PolyZ({-3, 0, 0, 0, 1}));
  auto at_inf = build_iterate_poly(M("x^2 + 1"), P("inf"), 1);
  EXPECT_EQ(at_inf.f, PolyZ{-1});
  EXPECT_EQ(at_inf.formal_degree, 2);
  RootCount rc = root_count_modp(at_inf, 7);
  EXPECT_EQ(rc.affine, 0);
  EXPECT_TRUE(rc.infinity);
  // Content is removed: 2x^2 - 6 for alpha = 3 under x^2 / 2... here 3/2.
  EXPECT_EQ(build_iterate_poly(M("x^2"), P("4/2"), 1).f, PolyZ({-2, 0, 1}));
  EXPECT_EQ(build_iterate_poly(M("2x^2 : 1"), P("4"), 1).f, PolyZ({-2, 0, 1}));
  EXPECT_EQ(code_of([] { build_iterate_poly(M("x^2"), P("3"), 13); }), Errc::kDegreeCapExceeded);
}

TEST(RootCount, Examples) {
  auto ip = build_iterate_poly(M("x^2"), P("3"), 1);
  EXPECT_EQ(root_count_modp(ip, 5).affine, 0);
  EXPECT_EQ(root_count_modp(ip, 11).affine, 2);
  EXPECT_FALSE(root_count_modp(ip, 11).infinity);
  EXPECT_EQ(code_of([&] { root_count_modp(ip, 2); }), Errc::kBadPrime);
  EXPECT_EQ(code_of([&] { root_count_modp(ip, 3); }), Errc::kBadPrime);
}

TEST(RootCount, BadPrimesMatchModulus) {
  std::mt19937_64 rng(12);
  int tested = 0;
  while (tested < 40) {
    PolyZ f = oracle::random_poly(rng, 2, 6), g = oracle::random_poly(rng, static_cast<int>(rng() % 3), 6);
    if (sgn(oracle::sylvester_resultant(f.coeffs(), 2, g.coeffs(), 2)) == 0) continue;
    if (gcd_int(f.content(), g.content()) != 1) continue;
    RationalMap map(f, g);
    ProjPoint alpha(Integer(static_cast<long>(rng() % 11) - 5), Integer(static_cast<long>(rng() % 4) + 1));
    if (rational_orbit(map, alpha).kind == RationalOrbit::Kind::kPeriodic) continue;
    for (int m = 1; m <= 2; ++m) {
      auto ip = build_iterate_poly(map, alpha, m);
      ASSERT_TRUE(ip.bad_modulus.has_value());
      for (std::uint64_t p : prime_range(3, 400)) {
        bool divides = mod_u64(*ip.bad_modulus, p) == 0;
        ASSERT_EQ(ip.is_bad_prime(p), divides) << map.to_string() << " alpha=" << alpha.to_string() << " p=" << p;
      }
    }
    ++tested;
  }
}

TEST(RootCount, MatchesExhaustiveScan) {
  std::mt19937_64 rng(99);
  auto primes = prime_range(3, 10000);
  std::vector<IteratePoly> corpus;
  for (const char* s : {"x^2", "x^2 - 1", "x^2 + 1 : x", "3x^2 - 1 : 2", "x^3 + 2"}) {
    for (const char* a : {"2", "3", "-5/2", "7"}) {
      for (int m = 1; m <= 3; ++m) {
        if (m == 3 && M(s).degree() == 3) continue;
        corpus.push_back(build_iterate_poly(M(s), P(a), m));
      }
    }
  }
  int checked = 0;
  while (checked < 600) {
    const auto& ip = corpus[rng() % corpus.size()];
    std::uint64_t p = primes[rng() % primes.size()];
    if (ip.is_bad_prime(p)) continue;
    EXPECT_EQ(root_count_modp(ip, p).affine, static_cast<int>(oracle::scan_roots(ip.f, p).size()));
    ++checked;
  }
}

TEST(RootCount, PreimageIdentityAgainstCensus) {
  std::vector<std::pair<const char*, const char*>> cases{
      {"x^2", "3"}, {"x^2 - 1", "2"}, {"x^2 + 1 : x", "1/2"}, {"2x^2 + 1 : x^2 + 3", "1"}, {"x^2 + 1 : x^2 - 2", "1"}};
  for (auto [ms, as] : cases) {
    RationalMap map = M(ms);
    for (int m = 1; m <= 3; ++m) {
      auto ip = build_iterate_poly(map, P(as), m);
      for (std::uint64_t p : prime_range(3, 2004)) {
        if (ip.is_bad_prime(p)) continue;
        auto census = functional_graph_census(reduce_map(map, p));
        std::uint64_t target = reduce_point(P(as), p).index(p);
        int hits = 0;
        for (std::uint64_t z = 0; z <= p; ++z) {
          std::uint64_t w = z;
          for (int k = 0; k < m; ++k) w = census.image[w];
          hits += w == target ? 1 : 0;
        }
        ASSERT_EQ(root_count_modp(ip, p).total(), hits) << ms << " alpha=" << as << " m=" << m << " p=" << p;
      }
    }
  }
}

TEST(TargetSystem, Validation) {
  EXPECT_EQ(code_of([] { TargetSystem({{M("x^2"), {}}}, 1); }), Errc::kEmptySystem);
  EXPECT_EQ(code_of([] { TargetSystem({}, 1); }), Errc::kEmptySystem);
  EXPECT_EQ(code_of([] { system_of("x^2", {"1"}, 1); }), Errc::kPeriodicInput);
  EXPECT_EQ(code_of([] { system_of("x^2 - 1", {"3", "-1"}, 1); }), Errc::kPeriodicInput);
  EXPECT_EQ(code_of([] { system_of("x^2", {"3"}, 13); }), Errc::kDegreeCapExceeded);
  auto sys = system_of("x^2", {"3", "5", "3"}, 2);
  EXPECT_EQ(sys.target_count(), 2u);
  EXPECT_EQ(sys.canonical_text(), "level=2;map=x^2 : 1;targets=3,5");
  EXPECT_EQ(sys.hash(), system_of("x^2", {"3", "5"}, 2).hash());
  EXPECT_NE(sys.hash(), system_of("x^2", {"5", "3"}, 2).hash());
}

TEST(Sweep, ResidueTable) {
  auto sys = system_of("x^2", {"3", "5", "7"}, 1);
  auto res = sweep(sys, 8, 100);
  std::uint64_t hits = 0;
  for (const auto& r : res.records) {
    bool expect = !is_qr(3, r.p) && !is_qr(5, r.p) && !is_qr(7, r.p);
    EXPECT_EQ(r.derangement, expect) << r.p;
    hits += expect;
  }
  auto p17 = std::find_if(res.records.begin(), res.records.end(), [](const SweepRecord& r) { return r.p == 17; });
  ASSERT_NE(p17, res.records.end());
  EXPECT_TRUE(p17->derangement);
  EXPECT_EQ(res.density.hits, hits);
  EXPECT_EQ(res.density.eligible, prime_range(8, 100).size());

  auto single = sweep(system_of("x^2", {"3"}, 1), 11, 12);
  ASSERT_EQ(single.records.size(), 1u);
  EXPECT_FALSE(single.records[0].derangement);
  EXPECT_EQ(single.records[0].root_counts[0], 2u);
}

TEST(Sweep, QuadraticAnchor) {
  DensityEstimate d = derangement_density(system_of("x^2", {"3"}, 1), 4, 100);
  EXPECT_EQ(d.hits, 12u);
  EXPECT_EQ(d.eligible, 23u);
  EXPECT_EQ(d.proportion, Rational(12, 23));
  EXPECT_EQ(code_of([] { derangement_density(system_of("x^2", {"3"}, 1), 24, 29); }), Errc::kEmptySystem);
}

TEST(Sweep, InfinityConvention) {
  // (x^2 + 1) / (x^2 - 2) sends infinity to 1, so 1 always has a preimage
  // at infinity and no prime is a derangement for it.
  auto sys = system_of("x^2 + 1 : x^2 - 2", {"1"}, 1);
  auto res = sweep(sys, 5, 500);
  ASSERT_FALSE(res.records.empty());
  for (const auto& r : res.records) {
    EXPECT_TRUE(r.infinity_hit);
    EXPECT_FALSE(r.derangement);
  }
}

TEST(Sweep, DeterministicAcrossWorkersAndResume) {
  auto sys = system_of("x^2", {"3", "5", "7"}, 3);
  auto render = [&](const SweepResult& r) {
    std::ostringstream os;
    write_sweep_csv(os, sys, r.records);
    return os.str();
  };
  SweepOptions serial;
  serial.workers = 1;
  serial.chunk_width = 4096;
  std::string ref = render(sweep(sys, 3, 60000, serial));
  EXPECT_EQ(ref.substr(0, ref.find('\n')), "p,r1.1,r1.2,r1.3,inf_flags,derangement");

  auto dir = std::filesystem::temp_directory_path() / ("arithdyn_cache_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  SweepOptions cached;
  cached.workers = 4;
  cached.chunk_width = 4096;
  cached.cache_file = dir / "sweep.jsonl";
  cached.max_new_chunks = 7;
  auto partial = sweep(sys, 3, 60000, cached);
  EXPECT_FALSE(partial.complete);
  EXPECT_EQ(partial.chunks_computed, 7u);
  // A torn line from an interrupted writer is skipped on reload.
  {
    std::ofstream torn(cached.cache_file, std::ios::app);
    torn << "{\"schema\":1,\"system\":\"" << sys.hash() << "\",\"lo\":";
  }
  cached.max_new_chunks.reset();
  auto resumed = sweep(sys, 3, 60000, cached);
  EXPECT_TRUE(resumed.complete);
  EXPECT_EQ(resumed.chunks_cached, 7u);
  EXPECT_EQ(resumed.chunks_computed, resumed.chunks_total - 7);
  EXPECT_EQ(render(resumed), ref);
  auto again = sweep(sys, 3, 60000, cached);
  EXPECT_EQ(again.chunks_computed, 0u);
  EXPECT_EQ(render(again), ref);
  std::filesystem::remove_all(dir);
}

TEST(Augment, Examples) {
  auto a = augment_targets(system_of("x^2", {"2"}, 1), {{0, 0, 1}});
  EXPECT_EQ(a.entries()[0].targets, (std::vector<ProjPoint>{P("2"), P("4")}));
  auto b = augment_targets(system_of("x^2 - 1", {"3"}, 1), {{0, 0, 2}});
  EXPECT_EQ(b.entries()[0].targets, (std::vector<ProjPoint>{P("3"), P("63")}));
  auto c = augment_targets(system_of("x^2", {"2"}, 1), {{0, 0, 0}});
  EXPECT_EQ(c.target_count(), 1u);
  EXPECT_EQ(code_of([] { augment_targets(system_of("x^2", {"2"}, 1), {{0, 0, 13}}); }), Errc::kDegreeCapExceeded);
}

TEST(Augment, RootContainment) {
  std::mt19937_64 rng(2024);
  std::vector<const char*> maps{"x^2 - 1", "x^2 + 1 : x", "3x^2 - 1 : 2", "x^2 + 2x : 5", "x^3 - x + 1"};
  auto primes = prime_range(5, 10000);
  int done = 0;
  while (done < 60) {
    RationalMap map = M(maps[rng() % maps.size()]);
    ProjPoint alpha(Integer(static_cast<long>(rng() % 21) - 10), Integer(static_cast<long>(rng() % 3) + 1));
    if (rational_orbit(map, alpha).kind != RationalOrbit::Kind::kUnverified) continue;
    int m = 1 + static_cast<int>(rng() % 2), r = 1 + static_cast<int>(rng() % 2);
    ProjPoint beta = alpha;
    for (int k = 0; k < r; ++k) beta = apply(map, beta);
    auto f = build_iterate_poly(map, alpha, m);
    auto g = build_iterate_poly(map, beta, m + r);
    for (int t = 0; t < 20; ++t) {
      std::uint64_t p = primes[rng() % primes.size()];
      if (!good_reduction(map, p) || f.f.degree() < 1) continue;
      PolyFp fp = PolyFp::from_z(p, f.f), gp = PolyFp::from_z(p, g.f);
      if (fp.degree() < 1) continue;
      for (std::uint64_t z : roots(fp)) ASSERT_EQ(gp.eval(z), 0u) << map.to_string() << " p=" << p;
    }
    ++done;
  }
}

TEST(Dependence, TwoImpliesEight) {
  for (int m = 1; m <= 3; ++m) {
    auto sys = system_of("x^2", {"2", "8"}, m);
    for (const auto& r : sweep(sys, 3, 20000).records) {
      if (r.root_counts[0] > 0) ASSERT_GT(r.root_counts[1], 0u) << "m=" << m << " p=" << r.p;
    }
  }
}

TEST(Derangement, PeriodDoesNotDivideLevel) {
  for (const char* ms : {"x^2", "x^2 - 1", "x^2 + 1 : x", "x^2 + 3"}) {
    for (const char* as : {"2", "3", "1/2", "5"}) {
      RationalMap map = M(ms);
      if (rational_orbit(map, P(as)).kind == RationalOrbit::Kind::kPeriodic) continue;
      for (int m = 1; m <= 3; ++m) {
        auto sys = TargetSystem({{map, {P(as)}}}, m);
        for (const auto& r : sweep(sys, 3, 2004).records) {
          if (!r.derangement) continue;
          OrbitShape s = orbit_shape(reduce_map(map, r.p), reduce_point(P(as), r.p));
          if (s.tail == 0) ASSERT_NE(m % s.period, 0u) << ms << " " << as << " p=" << r.p;
        }
      }
    }
  }
}

TEST(Independence, Errors) {
  EXPECT_EQ(code_of([] { independence_report(system_of("x^2", {"3"}, 1), 3, 100000); }), Errc::kInsufficientData);
  EXPECT_EQ(code_of([] { independence_report(system_of("x^2", {"3", "5"}, 1), 3, 100); }), Errc::kInsufficientData);
}

TEST(Independence, DependentPair) {
  auto rep = independence_report(system_of("x^2", {"2", "8"}, 2), 3, 100000);
  ASSERT_TRUE(rep.ratio.has_value());
  EXPECT_GT(std::abs(*rep.ratio - 1.0), 0.1);
  EXPECT_EQ(rep.dof, 1);
  std::uint64_t total = 0;
  for (auto c : rep.cells) total += c;
  EXPECT_EQ(total, rep.eligible);
  // has-root(2) forces has-root(8): no prime sits in the cell "8 rootless, 2 not".
  EXPECT_EQ(rep.cells[0b10], 0u);
}

}  // namespace
}  // namespace arithdyn
