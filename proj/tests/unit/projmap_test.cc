#include <gtest/gtest.h>

#include <random>

#include "arithdyn/error.hpp"
#include "arithdyn/exact/primes.hpp"
#include "arithdyn/projmap/rational_map.hpp"
#include "oracles.hpp"

namespace arithdyn {
namespace {

RationalMap M(const char* s) { return RationalMap::parse(s); }
ProjPoint P(const char* s) { return ProjPoint::parse(s); }

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const MathError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no MathError thrown";
  return Errc::kInvalidArgument;
}

TEST(ProjPoint, Canonical) {
  EXPECT_EQ(ProjPoint(Integer(-6), Integer(-4)).to_string(), "3/2");
  EXPECT_EQ(ProjPoint(Integer(-5), Integer(0)), ProjPoint::infinity());
  EXPECT_EQ(P("inf").to_string(), "inf");
  EXPECT_EQ(P("-4/6"), ProjPoint(Integer(-2), Integer(3)));
  EXPECT_THROW(ProjPoint(Integer(0), Integer(0)), MathError);
  EXPECT_THROW(P("1/0"), ParseError);
  EXPECT_THROW(P("abc"), ParseError);
  EXPECT_LT(P("-3"), P("1/2"));
  EXPECT_LT(P("100"), P("inf"));
}

TEST(ReducePoint, Examples) {
  EXPECT_EQ(reduce_point(P("3/2"), 5), ProjPointModP::affine(4));
  EXPECT_EQ(reduce_point(P("inf"), 7), ProjPointModP::infinity());
  EXPECT_EQ(reduce_point(P("5"), 5), ProjPointModP::affine(0));
  EXPECT_EQ(reduce_point(P("1/5"), 5), ProjPointModP::infinity());
  EXPECT_EQ(reduce_point(P("-1"), 7), ProjPointModP::affine(6));
}

TEST(RationalMap, ParseAndCanonicalForm) {
  EXPECT_EQ(M("x^2 + 1").to_string(), "x^2 + 1 : 1");
  EXPECT_EQ(M("[2x^2 + 2 : 4]"), M("x^2 + 1 : 2"));
  EXPECT_EQ(M("-x^2 : 1"), M("x^2 : -1"));
  EXPECT_EQ(M("x^2 : -1").num(), PolyZ({0, 0, 1}));
  EXPECT_EQ(M("1 : x^2").degree(), 2);
  EXPECT_THROW(M("x^2 : 1 : 1"), ParseError);
  EXPECT_THROW(M("x^^2"), ParseError);
  EXPECT_THROW(M("y^2"), ParseError);
  EXPECT_EQ(code_of([] { M("x + 1"); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([] { M("x : x^2"); }), Errc::kInvalidArgument);  // [XY : Y^2]
}

TEST(GoodReduction, Examples) {
  for (std::uint64_t p : prime_range(2, 200)) EXPECT_TRUE(good_reduction(M("x^2"), p));
  EXPECT_EQ(M("x^2").resultant(), 1);
  EXPECT_EQ(M("x^2 + 5").resultant(), 1);
  EXPECT_TRUE(good_reduction(M("x^2 + 5"), 5));
  EXPECT_FALSE(good_reduction(M("x^2 + 5 : x"), 5));
  EXPECT_FALSE(good_reduction(M("x^2 : 3"), 3));
}

TEST(GoodReduction, AgreesWithExactResultant) {
  std::mt19937_64 rng(3);
  auto primes = prime_range(2, 60);
  int tested = 0;
  while (tested < 300) {
    int df = static_cast<int>(rng() % 5), dg = static_cast<int>(rng() % 5);
    if (std::max(df, dg) < 2) continue;
    PolyZ f = oracle::random_poly(rng, df, 30), g = oracle::random_poly(rng, dg, 30);
    int d = std::max(df, dg);
    Integer res = oracle::sylvester_resultant(f.coeffs(), d, g.coeffs(), d);
    if (sgn(res) == 0 || gcd_int(f.content(), g.content()) != 1) continue;
    RationalMap map(f, g);
    EXPECT_EQ(abs(map.resultant()), abs(res));
    for (std::uint64_t p : primes) {
      ASSERT_EQ(good_reduction(map, p), mod_u64(res, p) != 0) << map.to_string() << " p=" << p;
    }
    ++tested;
  }
}

TEST(GoodReduction, PolynomialLeadingCoefficientCriterion) {
  // A polynomial map has good reduction at p iff its leading coefficient is a
  // p-adic unit, once the content is removed.
  std::mt19937_64 rng(41);
  auto primes = prime_range(2, 100);
  for (int trial = 0; trial < 100; ++trial) {
    PolyZ f = oracle::random_poly(rng, 2 + static_cast<int>(rng() % 5), 50);
    Integer c = f.content();
    RationalMap map(f, PolyZ{1});
    std::uint64_t p = primes[rng() % primes.size()];
    Integer lead = f.lead() / c;
    EXPECT_EQ(good_reduction(map, p), mod_u64(lead, p) != 0) << f.to_string() << " p=" << p;
  }
}

TEST(ReduceMap, Examples) {
  ReducedMap r = reduce_map(M("x^2 + 1"), 3);
  EXPECT_EQ(r.num(), PolyFp(3, {1, 0, 1}));
  EXPECT_EQ(r.den(), PolyFp(3, {1}));
  EXPECT_EQ(r.degree(), 2);
  ReducedMap r2 = reduce_map(M("x^2"), 2);
  EXPECT_EQ(r2.num(), PolyFp(2, {0, 0, 1}));
  EXPECT_EQ(code_of([] { reduce_map(M("x^2 + 5 : x"), 5); }), Errc::kBadReduction);
}

TEST(Compose, Examples) {
  EXPECT_EQ(compose(M("x^2"), M("x^2")), M("x^4"));
  EXPECT_EQ(compose(M("x^2 + 1"), M("x^2 + 1")), M("x^4 + 2x^2 + 2"));
  EXPECT_EQ(code_of([] { compose(M("x^2"), M("x^2"), 2); }), Errc::kDegreeCapExceeded);
  // [X^2+Y^2 : XY] o x^2 = (x^4 + 1) / x^2
  EXPECT_EQ(compose(M("x^2 + 1 : x"), M("x^2")), M("x^4 + 1 : x^2"));
}

TEST(Iterate, Examples) {
  EXPECT_EQ(iterate(M("x^2"), 3), M("x^8"));
  EXPECT_EQ(iterate(M("x^2 - 1"), 2), M("x^4 - 2x^2"));
  EXPECT_EQ(iterate(M("x^2"), 1), M("x^2"));
  EXPECT_EQ(code_of([] { iterate(M("x^2"), 13); }), Errc::kDegreeCapExceeded);
  EXPECT_EQ(iterate(M("x^2"), 12).degree(), 4096);
}

TEST(Iterate, AdditiveInExponent) {
  for (const char* s : {"x^2 - 1", "x^2 + 1 : x", "3x^2 - x : x^2 + 2", "x^3 - 2 : 5"}) {
    RationalMap phi = M(s);
    for (int a = 1; a <= 3; ++a) {
      for (int b = 1; b <= 3; ++b) {
        if (a + b > 5 || std::pow(phi.degree(), a + b) > kIterateDegreeCap) continue;
        EXPECT_EQ(iterate(phi, a + b), compose(iterate(phi, a), iterate(phi, b))) << s;
      }
    }
    // The composite resultant is nonzero, as for any morphism.
    EXPECT_NE(sgn(iterate(phi, 2).resultant()), 0);
  }
}

TEST(Apply, Examples) {
  EXPECT_EQ(apply(M("x^2"), P("3")), P("9"));
  EXPECT_EQ(apply(M("x^2"), P("inf")), P("inf"));
  EXPECT_EQ(apply(M("x^2 + 1 : x"), P("1")), P("2"));
  EXPECT_EQ(apply(M("x^2 + 1 : x"), P("0")), P("inf"));
  EXPECT_EQ(apply(M("x^2 - 1"), P("1/2")), P("-3/4"));
}

TEST(Apply, ReductionCommutesExhaustively) {
  std::vector<RationalMap> maps{M("x^2"), M("x^2 - 1"), M("x^2 + 1 : x"), M("3x^2 - x : x^2 + 2"), M("x^3 + x"),
                                M("2x^2 + 1 : 4x - 3")};
  std::vector<ProjPoint> pts{P("inf")};
  for (int a = -12; a <= 12; ++a) {
    for (int b = 1; b <= 7; ++b) pts.emplace_back(Integer(a), Integer(b));
  }
  for (std::uint64_t p : prime_range(2, 102)) {
    for (const auto& map : maps) {
      if (!good_reduction(map, p)) continue;
      ReducedMap r = reduce_map(map, p);
      for (const auto& pt : pts) {
        ASSERT_EQ(reduce_point(apply(map, pt), p), apply(r, reduce_point(pt, p)))
            << map.to_string() << " at " << pt.to_string() << " p=" << p;
      }
    }
  }
}

TEST(Wronskian, Examples) {
  EXPECT_EQ(wronskian(M("x^2")), (BinaryForm{PolyZ{0, 4}, 2}));
  for (long c : {-3L, 1L, 7L}) {
    BinaryForm w = wronskian(RationalMap(PolyZ{c, 0, 1}, PolyZ{1}));
    EXPECT_EQ(w, (BinaryForm{PolyZ{0, 4}, 2})) << c;
  }
  EXPECT_EQ(wronskian(M("x^2 + 1 : x")), (BinaryForm{PolyZ{-2, 0, 2}, 2}));
}

TEST(CriticalPoints, Examples) {
  EXPECT_EQ(critical_points_modp(M("x^2"), 7),
            (std::vector<ProjPointModP>{ProjPointModP::affine(0), ProjPointModP::infinity()}));
  EXPECT_EQ(code_of([] { critical_points_modp(M("x^2"), 3); }), Errc::kCharTooSmall);
  EXPECT_EQ(critical_points_modp(M("x^2"), 5).size(), 2u);

  // x^3 + x: W = 3Y^2 (3X^2 + Y^2), so the affine zeros solve 9x^2 + 3 = 0.
  std::vector<ProjPointModP> expected;
  for (std::uint64_t x = 0; x < 11; ++x) {
    if ((9 * x * x + 3) % 11 == 0) expected.push_back(ProjPointModP::affine(x));
  }
  expected.push_back(ProjPointModP::infinity());
  EXPECT_EQ(critical_points_modp(M("x^3 + x"), 11), expected);
  EXPECT_EQ(critical_points_modp(M("x^3 + x"), 13).size(), 3u);  // -1/3 = 4 = 2^2 mod 13

  EXPECT_EQ(critical_points_modp(M("x^2 + 1 : x"), 7),
            (std::vector<ProjPointModP>{ProjPointModP::affine(1), ProjPointModP::affine(6)}));
}

TEST(CriticalPoints, CountWithMultiplicity) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    PolyZ f = oracle::random_poly(rng, 2 + static_cast<int>(rng() % 4), 20);
    PolyZ g = oracle::random_poly(rng, static_cast<int>(rng() % (f.degree() + 1)), 20);
    int d = f.degree();
    if (sgn(oracle::sylvester_resultant(f.coeffs(), d, g.coeffs(), d)) == 0) continue;
    RationalMap map(f, g);
    BinaryForm w = wronskian(map);
    ASSERT_EQ(w.degree, 2 * d - 2);
    for (std::uint64_t p : prime_range(2 * d + 1, 2 * d + 60)) {
      if (!good_reduction(map, p)) continue;
      PolyFp wp = PolyFp::from_z(p, w.poly);
      ASSERT_FALSE(wp.is_zero());
      // Affine multiplicities plus the order at infinity account for 2d - 2.
      int affine = 0;
      if (wp.degree() >= 1) {
        PolyFp rest = wp.monic();
        while (rest.degree() >= 1) {
          PolyFp sq = gcd(rest, rest.derivative());
          PolyFp part = divmod(rest, sq).first;
          for (const auto& [k, fac] : distinct_degree_factorization(part)) affine += fac.degree();
          rest = sq;
        }
      }
      EXPECT_EQ(affine + (2 * d - 2 - wp.degree()), 2 * d - 2);
      auto crit = critical_points_modp(map, p);
      std::size_t affine_distinct = wp.degree() >= 1 ? roots(wp).size() : 0;
      EXPECT_EQ(crit.size(), affine_distinct + (wp.degree() < 2 * d - 2 ? 1 : 0));
    }
  }
}

}  // namespace
}  // namespace arithdyn
