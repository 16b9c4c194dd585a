#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/cumulants.hpp"
#include "oracles.hpp"

using fsc::CumulantSequence;
using fsc::MomentSequence;
using fsc::Rational;
using fsc::Support;

namespace {

Rational rational_pow(Rational base, int p) {
  Rational acc(1);
  for (int i = 0; i < p; ++i) acc *= base;
  return acc;
}

}  // namespace

TEST_CASE("moments of the catalog laws") {
  const MomentSequence semi = fsc::moments_from_cumulants(fsc::semicircular(), 4);
  CHECK(semi.values == std::vector<Rational>{0, 1, 0, 2});

  const MomentSequence poisson = fsc::moments_from_cumulants(fsc::free_poisson(1, 8), 3);
  CHECK(poisson.moment(3) == 5);

  const CumulantSequence zero({Rational(0)}, Support::finitely_supported);
  for (const auto& m : fsc::moments_from_cumulants(zero, 6).values) CHECK(m == 0);
}

TEST_CASE("moments match the literal noncrossing partition sum") {
  oracle::RationalGen gen(20240811);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(trial % 8);
    std::vector<Rational> r;
    for (int k = 0; k < 8; ++k) r.push_back(gen.signed_value());
    const CumulantSequence seq(r, Support::truncated);
    const MomentSequence m = fsc::moments_from_cumulants(seq, n);
    for (int j = 1; j <= n; ++j) CHECK(m.moment(j) == oracle::moment_by_partition_sum(r, j));
  }
}

TEST_CASE("free poisson moments are the catalan numbers") {
  const MomentSequence m = fsc::moments_from_cumulants(fsc::free_poisson(1, 12), 12);
  for (int n = 1; n <= 12; ++n) CHECK(m.moment(n) == Rational(fsc::catalan_number(n)));
}

TEST_CASE("cumulants from moments") {
  SUBCASE("point mass") {
    const Rational a(3, 2);
    std::vector<Rational> m;
    for (int n = 1; n <= 8; ++n) m.push_back(rational_pow(a, n));
    const CumulantSequence r = fsc::cumulants_from_moments(MomentSequence{m}, 8);
    CHECK(r.cumulant(1) == a);
    for (int k = 2; k <= 8; ++k) CHECK(r.cumulant(k) == 0);
  }
  SUBCASE("semicircle roundtrip") {
    const MomentSequence m{{0, 1, 0, 2, 0, 5}};
    const CumulantSequence r = fsc::cumulants_from_moments(m, 6);
    CHECK(r.values() == std::vector<Rational>{0, 1, 0, 0, 0, 0});
  }
  SUBCASE("first cumulant is the mean") {
    const MomentSequence m{{Rational(7, 3)}};
    CHECK(fsc::cumulants_from_moments(m, 1).cumulant(1) == Rational(7, 3));
  }
}

TEST_CASE("roundtrip is exact for random rational sequences") {
  oracle::RationalGen gen(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 12;
    std::vector<Rational> r;
    for (int k = 0; k < n; ++k) r.push_back(gen.signed_value());
    const CumulantSequence seq(r, Support::truncated);
    const MomentSequence m = fsc::moments_from_cumulants(seq, n);
    const CumulantSequence back = fsc::cumulants_from_moments(m, n);
    CHECK(back.values() == r);
  }
}

TEST_CASE("semigroup scaling") {
  const CumulantSequence base = fsc::free_poisson(Rational(1, 2), 6);
  const CumulantSequence at0 = fsc::semigroup_cumulants(base, 0);
  for (int k = 1; k <= 6; ++k) CHECK(at0.cumulant(k) == 0);
  CHECK(fsc::semigroup_cumulants(base, 1).values() == base.values());
  CHECK(fsc::semigroup_cumulants(fsc::semicircular(), 3).cumulant(2) == 3);
  CHECK_THROWS_AS(fsc::semigroup_cumulants(base, Rational(-1)), fsc::Error);
}

TEST_CASE("semigroup additivity: cumulants add, convolution moments agree") {
  oracle::RationalGen gen(991);
  std::vector<Rational> r;
  for (int k = 0; k < 10; ++k) r.push_back(gen.signed_value());
  const CumulantSequence seq(r, Support::truncated);
  const Rational s(2, 3), t(3, 4);
  const CumulantSequence sum = fsc::semigroup_cumulants(seq, s + t);
  CumulantSequence convolved = fsc::semigroup_cumulants(seq, s);
  {
    std::vector<Rational> v = convolved.values();
    const CumulantSequence other = fsc::semigroup_cumulants(seq, t);
    for (int k = 1; k <= 10; ++k) v[static_cast<size_t>(k) - 1] += other.cumulant(k);
    convolved = CumulantSequence(v, Support::truncated);
  }
  CHECK(fsc::moments_from_cumulants(sum, 10).values == fsc::moments_from_cumulants(convolved, 10).values);
}

TEST_CASE("catalog entries") {
  const CumulantSequence semi = fsc::semicircular();
  CHECK(semi.finitely_supported());
  CHECK(semi.cumulant(2) == 1);
  CHECK(semi.cumulant(9) == 0);
  CHECK(semi.is_semicircular_standard());

  const CumulantSequence fp = fsc::free_poisson(1, 16);
  for (int k = 1; k <= 16; ++k) CHECK(fp.cumulant(k) == 1);
  CHECK_FALSE(fp.finitely_supported());

  // jumps at 1/2: k-th jump moment (1/2)^k
  std::vector<Rational> jumps;
  for (int k = 1; k <= 6; ++k) jumps.push_back(rational_pow(Rational(1, 2), k));
  const CumulantSequence fcp = fsc::free_compound_poisson(2, jumps);
  for (int k = 1; k <= 6; ++k) CHECK(fcp.cumulant(k) == Rational(2) * rational_pow(Rational(1, 2), k));
}

TEST_CASE("truncation is an error, finite support is not") {
  const CumulantSequence truncated({1, 1}, Support::truncated);
  CHECK_THROWS_AS(truncated.cumulant(3), fsc::Error);
  CHECK_THROWS_AS(fsc::moments_from_cumulants(truncated, 3), fsc::Error);
  const CumulantSequence finite({1, 1}, Support::finitely_supported);
  CHECK(finite.cumulant(3) == 0);
  CHECK(fsc::moments_from_cumulants(finite, 3).moment(3) == 4);  // 1 + 3*1*1 + 1
  CHECK_THROWS_AS(fsc::moments_from_cumulants(finite, 15), fsc::Error);  // desk-scale cap
}

TEST_CASE("small-time ratio") {
  SUBCASE("semicircular p = 2 is exactly 1") {
    for (const Rational t : {Rational(1), Rational(1, 7), Rational(1, 1000)})
      CHECK(fsc::small_time_ratio(fsc::semicircular(), 2, t) == 1);
  }
  SUBCASE("p = 2 equals r_2 + t r_1^2 in general") {
    oracle::RationalGen gen(5);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Rational> r{gen.signed_value(), gen.signed_value()};
      const CumulantSequence seq(r, Support::truncated);
      const Rational t(1, 64);
      CHECK(fsc::small_time_ratio(seq, 2, t) == r[1] + t * r[0] * r[0]);
    }
  }
  SUBCASE("free poisson p = 4 approaches r_4") {
    const Rational t(1, 10000);
    const Rational ratio = fsc::small_time_ratio(fsc::free_poisson(1, 8), 4, t);
    CHECK(abs(ratio - 1) < Rational(1, 1000));
  }
  SUBCASE("slope bound |ratio - r_p| <= c t with stable c") {
    const CumulantSequence fp = fsc::free_poisson(1, 10);
    const int p = 4;
    // fit c on the coarsest t
    const Rational t0(1, 64);
    const Rational c = abs(fsc::small_time_ratio(fp, p, t0) - 1) / t0;
    for (int e = 7; e <= 12; ++e) {
      const Rational t(1, 1 << e);
      CHECK(abs(fsc::small_time_ratio(fp, p, t) - 1) <= c * t);
    }
  }
  CHECK_THROWS_AS(fsc::small_time_ratio(fsc::semicircular(), 3, Rational(1, 2)), fsc::Error);
  CHECK_THROWS_AS(fsc::small_time_ratio(fsc::semicircular(), 2, Rational(2)), fsc::Error);
}

TEST_CASE("nonnegativity probe") {
  CHECK(fsc::free_poisson(1, 8).all_nonnegative(8));
  const CumulantSequence mixed({1, Rational(-1, 2)}, Support::finitely_supported);
  CHECK_FALSE(mixed.all_nonnegative(2));
  CHECK(mixed.all_nonnegative(1));
}
