#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/scalar_integrals.hpp"
#include "oracles.hpp"

using fsc::CumulantSequence;
using fsc::Rational;
using fsc::StepFunction;
using fsc::Support;

namespace {

StepFunction indicator01() { return StepFunction({0, 1}, {1}); }

StepFunction random_nonneg_step(oracle::RationalGen& gen, int max_segments = 4) {
  std::uniform_int_distribution<int> nseg(1, max_segments);
  const int m = nseg(gen.rng);
  std::vector<Rational> breaks{0};
  std::vector<Rational> values;
  for (int i = 0; i < m; ++i) {
    breaks.push_back(breaks.back() + gen.positive(3, 2) + Rational(1, 4));
    values.push_back(gen.positive(3, 3));
  }
  return StepFunction(std::move(breaks), std::move(values));
}

}  // namespace

TEST_CASE("step function basics") {
  const StepFunction f({0, 1, 2}, {1, 3});
  CHECK(f.value_at(Rational(0)) == 1);
  CHECK(f.value_at(Rational(3, 2)) == 3);
  CHECK(f.value_at(Rational(2)) == 0);
  CHECK(f.value_at(Rational(-1)) == 0);
  CHECK(f.integral() == 4);

  CHECK_THROWS_AS(StepFunction({0, 0}, {1}), fsc::Error);
  CHECK_THROWS_AS(StepFunction({1, 0}, {1}), fsc::Error);
  CHECK_THROWS_AS(StepFunction({0, 1}, {}), fsc::Error);
}

TEST_CASE("lp powers") {
  CHECK(indicator01().lp_power(1) == 1);
  CHECK(indicator01().lp_power(7) == 1);
  CHECK(StepFunction({0, 3}, {2}).lp_power(2) == 12);
  CHECK(StepFunction({0, 1, 2}, {1, 3}).lp_power(3) == 28);
  CHECK(StepFunction({0, 1}, {-2}).lp_power(3) == 8);  // |f|
}

TEST_CASE("integral cumulants") {
  SUBCASE("indicator of a short interval gives the semigroup law") {
    const StepFunction f({Rational(1, 2), Rational(3, 4)}, {1});
    const CumulantSequence nu = fsc::integral_cumulants(f, fsc::free_poisson(1, 8));
    for (int k = 1; k <= 8; ++k) CHECK(nu.cumulant(k) == Rational(1, 4));
  }
  SUBCASE("semicircular base: nu = mu at time ||f||_2^2") {
    const StepFunction f({0, 1, 2}, {1, 3});
    const CumulantSequence nu = fsc::integral_cumulants(f, fsc::semicircular());
    CHECK(nu.cumulant(1) == 0);
    CHECK(nu.cumulant(2) == 10);
    CHECK(nu.finitely_supported());
    for (int k = 3; k <= 9; ++k) CHECK(nu.cumulant(k) == 0);
  }
  SUBCASE("zero integrand gives the point mass at zero") {
    const StepFunction zero({0, 1}, {0});
    const CumulantSequence nu = fsc::integral_cumulants(zero, fsc::free_poisson(1, 6));
    for (int k = 1; k <= 6; ++k) CHECK(nu.cumulant(k) == 0);
  }
}

TEST_CASE("diagonal measure cumulants") {
  SUBCASE("semicircular k = 2: constant equal to t") {
    const CumulantSequence d = fsc::diagonal_cumulants(fsc::semicircular(), 2, Rational(7, 5), 5);
    CHECK(d.cumulant(1) == Rational(7, 5));
    for (int n = 2; n <= 5; ++n) CHECK(d.cumulant(n) == 0);
  }
  SUBCASE("k = 1 recovers the semigroup") {
    oracle::RationalGen gen(55);
    std::vector<Rational> r;
    for (int k = 0; k < 6; ++k) r.push_back(gen.signed_value());
    const CumulantSequence seq(r, Support::truncated);
    const Rational t(3, 7);
    CHECK(fsc::diagonal_cumulants(seq, 1, t, 6).values() == fsc::semigroup_cumulants(seq, t).values());
  }
  SUBCASE("free poisson k = 3, t = 2") {
    const CumulantSequence d = fsc::diagonal_cumulants(fsc::free_poisson(1, 12), 3, 2, 4);
    for (int n = 1; n <= 4; ++n) CHECK(d.cumulant(n) == 2);
  }
  CHECK_THROWS_AS(fsc::diagonal_cumulants(fsc::free_poisson(1, 8), 3, 1, 4), fsc::Error);  // needs r_12
}

TEST_CASE("mu-norm identities") {
  SUBCASE("semicircular inner sum is catalan times ||f||_2^2n") {
    const StepFunction f({0, 1, 2}, {1, 3});
    const Rational l2 = f.lp_power(2);
    for (int n = 1; n <= 6; ++n) {
      Rational expect = Rational(fsc::catalan_number(n));
      for (int i = 0; i < n; ++i) expect *= l2;
      CHECK(fsc::mu_norm_power(f, fsc::semicircular(), 2 * n) == expect);
    }
  }
  SUBCASE("indicator: inner sum is the moment of mu_1") {
    const CumulantSequence fp = fsc::free_poisson(1, 14);
    const auto m = fsc::moments_from_cumulants(fp, 12);
    for (int n = 2; n <= 12; n += 2)
      CHECK(fsc::mu_norm_power(indicator01(), fp, n) == m.moment(n));
  }
  SUBCASE("n = 2 closed form") {
    oracle::RationalGen gen(123);
    for (int trial = 0; trial < 10; ++trial) {
      const StepFunction f = random_nonneg_step(gen);
      std::vector<Rational> r{gen.positive(), gen.positive()};
      const CumulantSequence seq(r, Support::truncated);
      const Rational expect = r[1] * f.lp_power(2) + r[0] * r[0] * f.lp_power(1) * f.lp_power(1);
      CHECK(fsc::mu_norm_power(f, seq, 2) == expect);
    }
  }
  SUBCASE("regime error on a negative cumulant") {
    const CumulantSequence bad({Rational(1), Rational(-1)}, Support::truncated);
    CHECK_THROWS_AS(fsc::mu_norm_power(indicator01(), bad, 2), fsc::Error);
  }
  CHECK_THROWS_AS(fsc::mu_norm_power(indicator01(), fsc::semicircular(), 3), fsc::Error);
}

TEST_CASE("mu-norm tail diagnostics") {
  SUBCASE("semicircular with unit l2 norm approaches 2 from below") {
    const auto tail = fsc::mu_norm_tail(indicator01(), fsc::semicircular(), 12);
    REQUIRE(tail.values.size() == 6);
    double prev = 0.0;
    for (const auto& [n, v] : tail.values) {
      CHECK(v > prev);
      CHECK(v < 2.0);
      prev = v;
    }
    CHECK(tail.extrapolated > tail.values.back().second);
    CHECK(tail.extrapolated < 2.3);
  }
  SUBCASE("zero integrand") {
    const StepFunction zero({0, 1}, {0});
    for (const auto& [n, v] : fsc::mu_norm_tail(zero, fsc::free_poisson(1, 14), 10).values)
      CHECK(v == 0.0);
  }
}

TEST_CASE("norm properties on random nonnegative step functions") {
  oracle::RationalGen gen(777);
  const CumulantSequence bases[] = {fsc::semicircular(), fsc::free_poisson(1, 14),
                                    fsc::free_compound_poisson_point(2, Rational(1, 2), 14)};
  for (int trial = 0; trial < 30; ++trial) {
    const CumulantSequence& base = bases[trial % 3];
    const StepFunction f = random_nonneg_step(gen);
    const StepFunction g = random_nonneg_step(gen);
    const int n = 2 * (1 + trial % 5);  // 2..10

    // triangle inequality
    const double lhs = fsc::mu_norm(f + g, base, n);
    CHECK(lhs <= fsc::mu_norm(f, base, n) + fsc::mu_norm(g, base, n) + 1e-12 * (1.0 + lhs));

    // exact homogeneity of the inner sum: ||c f||^n = c^n ||f||^n
    const Rational c(3, 2);
    Rational cn(1);
    for (int i = 0; i < n; ++i) cn *= c;
    CHECK(fsc::mu_norm_power(f.scaled(c), base, n) == cn * fsc::mu_norm_power(f, base, n));

    // monotonicity: g <= f + g pointwise
    CHECK(fsc::mu_norm(g, base, n) <= fsc::mu_norm(f + g, base, n) + 1e-12);

    // contraction bound: f <= C on [0,1) implies ||f 1_[0,1)||_n <= ||C 1_[0,1)||_n
    Rational cbound(0);
    for (const auto& v : f.values())
      if (v > cbound) cbound = v;
    const StepFunction f01({0, 1}, {f.value_at(Rational(1, 2))});
    const StepFunction cap({0, 1}, {cbound});
    CHECK(fsc::mu_norm(f01, base, n) <= fsc::mu_norm(cap, base, n) + 1e-12);
  }
}

TEST_CASE("isometry-norm comparison is an equality at n = 2 for unit variance") {
  oracle::RationalGen gen(31);
  for (const CumulantSequence& base : {fsc::semicircular(), fsc::free_poisson(1, 8)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const StepFunction f = random_nonneg_step(gen);
      const Rational expect = f.lp_power(2) + base.cumulant(1) * base.cumulant(1) * f.integral() * f.integral();
      CHECK(fsc::mu_norm_power(f, base, 2) == expect);
    }
  }
}

TEST_CASE("moment flow") {
  SUBCASE("semicircular unit integrand matches the closed moments") {
    const auto res = fsc::moment_flow(indicator01(), fsc::semicircular(), 4, 1.0, 4000);
    CHECK_FALSE(res.accuracy_warning);
    CHECK(res.moments[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(res.moments[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.moments[3] == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("pure drift integrates r_1 f") {
    const CumulantSequence drift({Rational(5, 4)}, Support::finitely_supported);
    const StepFunction f({0, 1, 2}, {1, 3});
    const auto res = fsc::moment_flow(f, drift, 1, 1.5, 1000);
    // int_0^1.5 f = 1 + 0.5*3 = 2.5, times r_1
    CHECK(res.moments[0] == doctest::Approx(1.25 * 2.5).epsilon(1e-10));
  }
  SUBCASE("zero integrand stays at zero") {
    const StepFunction zero({0, 1}, {0});
    const auto res = fsc::moment_flow(zero, fsc::free_poisson(1, 6), 6, 1.0, 500);
    for (double m : res.moments) CHECK(m == 0.0);
  }
  SUBCASE("short step counts warn") {
    CHECK(fsc::moment_flow(indicator01(), fsc::semicircular(), 2, 1.0, 50).accuracy_warning);
  }
}

TEST_CASE("moment flow agrees with the cumulant route") {
  oracle::RationalGen gen(2024);
  const CumulantSequence bases[] = {fsc::semicircular(), fsc::free_poisson(1, 8),
                                    fsc::free_compound_poisson_point(2, Rational(1, 2), 8)};
  for (int trial = 0; trial < 3; ++trial) {
    const StepFunction f = random_nonneg_step(gen, 3);
    const CumulantSequence& base = bases[trial % 3];
    const double horizon = fsc::to_double(f.support_end()) + 0.25;
    const auto flow = fsc::moment_flow(f, base, 8, horizon, 10000);
    const auto exact = fsc::moments_from_cumulants(fsc::integral_cumulants(f, base), 8);
    for (int n = 1; n <= 8; ++n) {
      const double want = fsc::to_double(exact.moment(n));
      const double got = flow.moments[static_cast<size_t>(n) - 1];
      CHECK(std::abs(got - want) <= 1e-8 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("diagonal norm comparison (lower BDG bound)") {
  SUBCASE("k = 1 is an exact tie") {
    oracle::RationalGen gen(8);
    for (int trial = 0; trial < 5; ++trial) {
      const StepFunction f = random_nonneg_step(gen);
      const auto rep = fsc::bdg_check(f, fsc::free_poisson(1, 10), 1, 6);
      CHECK(rep.lhs == rep.rhs);
      CHECK(rep.holds);
    }
  }
  SUBCASE("free poisson, k = 2, n = 2") {
    const auto rep = fsc::bdg_check(indicator01(), fsc::free_poisson(1, 8), 2, 2);
    CHECK(rep.holds);
    CHECK(rep.lhs <= rep.rhs);
  }
  SUBCASE("semicircular, k = 2") {
    const StepFunction f({0, 1, 2}, {Rational(1, 2), 2});
    for (int n : {2, 4, 6}) {
      const auto rep = fsc::bdg_check(f, fsc::semicircular(), 2, n);
      CHECK(rep.holds);
    }
  }
  SUBCASE("random nonnegative instances, k <= 3, n <= 6") {
    oracle::RationalGen gen(4096);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Rational> r;
      for (int k = 0; k < 18; ++k) r.push_back(gen.positive(4, 3));
      const CumulantSequence base(r, Support::truncated);
      const StepFunction f = random_nonneg_step(gen);
      const int k = 1 + trial % 3;
      const int n = 2 * (1 + trial % 3);
      const auto rep = fsc::bdg_check(f, base, k, n);
      CHECK(rep.holds);
    }
  }
  SUBCASE("regime error") {
    const CumulantSequence bad({Rational(1), Rational(-1)}, Support::finitely_supported);
    CHECK_THROWS_AS(fsc::bdg_check(indicator01(), bad, 2, 2), fsc::Error);
  }
}
