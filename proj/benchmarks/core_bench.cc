#include <benchmark/benchmark.h>

#include "arithdyn/chebsweep/sweep.hpp"
#include "arithdyn/exact/primes.hpp"
#include "arithdyn/lattes/lattes.hpp"
#include "arithdyn/moddyn/orbit.hpp"

namespace arithdyn {
namespace {

void BM_PrimeRange(benchmark::State& state) {
  const auto hi = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prime_range(2, hi));
}
BENCHMARK(BM_PrimeRange)->Arg(1 << 16)->Arg(1 << 20);

void BM_RootCount(benchmark::State& state) {
  IteratePoly ip = build_iterate_poly(RationalMap::parse("x^2"), ProjPoint::parse("3"), static_cast<int>(state.range(0)));
  auto primes = prime_range(1000, 20000);
  std::size_t i = 0;
  for (auto _ : state) {
    std::uint64_t p = primes[i++ % primes.size()];
    if (ip.is_bad_prime(p)) continue;
    benchmark::DoNotOptimize(root_count_unchecked(ip, p));
  }
}
BENCHMARK(BM_RootCount)->DenseRange(1, 5);

void BM_SweepPrime(benchmark::State& state) {
  TargetSystem sys({{RationalMap::parse("x^2"), {ProjPoint::parse("3"), ProjPoint::parse("5"), ProjPoint::parse("7")}}},
                   3);
  auto primes = prime_range(100000, 200000);
  std::size_t i = 0;
  for (auto _ : state) {
    std::uint64_t p = primes[i++ % primes.size()];
    if (prime_eligible(sys, p)) benchmark::DoNotOptimize(sweep_prime(sys, p));
  }
}
BENCHMARK(BM_SweepPrime);

void BM_OrbitShape(benchmark::State& state) {
  ReducedMap r = reduce_map(RationalMap::parse("x^2 + 1"), 1000003);
  std::uint64_t z = 0;
  for (auto _ : state) benchmark::DoNotOptimize(orbit_shape(r, ProjPointModP::affine(z++ % 1000003)));
}
BENCHMARK(BM_OrbitShape);

void BM_PointOrder(benchmark::State& state) {
  EllipticCurve E(0, 1);
  ECPoint Q = ECPoint::affine(Rational(2), Rational(3));
  auto primes = prime_range(static_cast<std::uint64_t>(state.range(0)), static_cast<std::uint64_t>(state.range(0)) + 5000);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(point_order_modp(E, Q, primes[i++ % primes.size()]));
}
BENCHMARK(BM_PointOrder)->Arg(10000)->Arg(1000000000);

}  // namespace
}  // namespace arithdyn

BENCHMARK_MAIN();
