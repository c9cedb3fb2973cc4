#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "mlebound/moments.hpp"
#include "mlebound/neighborhoods.hpp"
#include "mlebound/q_terms.hpp"
#include "oracles.hpp"

using namespace mlebound;

TEST_CASE("neighbourhoods at n=10, m=1") {
  const auto sys = build_neighborhoods(10, 1);
  CHECK(sys.A(1) == Interval{1, 3});
  CHECK(sys.B(1) == Interval{1, 5});
  CHECK(sys.A(6) == Interval{4, 8});
  CHECK(sys.B(6) == Interval{2, 10});
  CHECK(sys.A(10) == Interval{8, 10});
  CHECK(sys.B(10) == Interval{6, 10});
}

TEST_CASE("zero range and full clipping") {
  const auto zero = build_neighborhoods(10, 0);
  for (std::size_t i = 1; i <= 10; ++i) {
    CHECK(zero.A(i) == Interval{i, i});
    CHECK(zero.B(i) == Interval{i, i});
  }
  const auto clipped = build_neighborhoods(3, 5);
  for (std::size_t i = 1; i <= 3; ++i) {
    CHECK(clipped.A(i) == Interval{1, 3});
    CHECK(clipped.B(i) == Interval{1, 3});
  }
}

TEST_CASE("neighbourhood errors") {
  CHECK_THROWS_AS(build_neighborhoods(0, 1), std::invalid_argument);
  const auto sys = build_neighborhoods(5, 1);
  CHECK_THROWS_AS(sys.A(0), std::out_of_range);
  CHECK_THROWS_AS(sys.B(6), std::out_of_range);
}

TEST_CASE("neighbourhood shape, exhaustive over n <= 200, m <= 10") {
  for (std::size_t n = 1; n <= 200; ++n) {
    for (std::size_t m = 0; m <= 10; ++m) {
      const auto sys = build_neighborhoods(n, m);
      for (std::size_t i = 1; i <= n; ++i) {
        const Interval a = sys.A(i), b = sys.B(i);
        const auto ea = oracle::window(n, i, 2 * m);
        const auto eb = oracle::window(n, i, 4 * m);
        REQUIRE(a.first == ea.front());
        REQUIRE(a.last == ea.back());
        REQUIRE(b.first == eb.front());
        REQUIRE(b.last == eb.back());
        REQUIRE(a.contains(i));
        REQUIRE(b.contains(a));
        REQUIRE(a.size() <= 4 * m + 1);
        REQUIRE(b.size() <= 8 * m + 1);
        for (std::size_t j = 1; j <= n; ++j) {
          if (!a.contains(j)) REQUIRE((j > i ? j - i : i - j) > 2 * m);
        }
      }
    }
  }
}

TEST_CASE("very large n costs nothing") {
  const auto sys = build_neighborhoods(1000000000ull, 3);
  CHECK(sys.A(500) == Interval{494, 506});
  CHECK(sys.B(1000000000ull) == Interval{1000000000ull - 12, 1000000000ull});
}

TEST_CASE("moment profile validation") {
  CHECK_NOTHROW(ScoreMomentProfile::uniform(4, 1.0, 3.0));
  CHECK_THROWS_AS(ScoreMomentProfile::uniform(4, 2.0, 3.0), std::invalid_argument);  // 4 > 3
  CHECK_THROWS_AS(ScoreMomentProfile::uniform(4, -1.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(ScoreMomentProfile::uniform(4, NAN, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(ScoreMomentProfile::uniform(0, 1.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(ScoreMomentProfile::uniform(4, 1.0, 3.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ScoreMomentProfile::uniform(4, 1.0, 3.0, 3.0), std::invalid_argument);  // > 3^{3/4}
  CHECK_NOTHROW(ScoreMomentProfile::uniform(4, 1.0, 3.0, 1.5957691216057308));
  const std::vector<double> two{1.0, 1.0};
  const std::vector<double> three{3.0, 3.0, 3.0};
  CHECK_THROWS_AS(ScoreMomentProfile::from_values(two, three), std::invalid_argument);
}

TEST_CASE("moment profile run merging and lookup") {
  const std::vector<double> m2{1, 1, 2, 2, 2, 1};
  const std::vector<double> m4{3, 3, 12, 12, 12, 3};
  const auto p = ScoreMomentProfile::from_values(m2, m4);
  CHECK(p.size() == 6);
  CHECK(p.runs().size() == 3);
  CHECK(p.second(3) == 2.0);
  CHECK(p.fourth(6) == 3.0);
  CHECK(p.run_index(5) == 1);
  CHECK_THROWS_AS(p.second(7), std::out_of_range);
  CHECK_THROWS_AS(p.second(0), std::out_of_range);
}

TEST_CASE("q_term frozen values") {
  SUBCASE("interior constant at n = 1 scaling") {
    // m = 1, all second moments 1 and fourth moments 3: 90 + 90 3^{3/4} + 25 sqrt(3).
    const auto sys = build_neighborhoods(9, 1);
    const auto p = ScoreMomentProfile::uniform(9, 1.0, 3.0);
    const double q = q_term(5, sys, p) * std::pow(9.0, 1.5);
    CHECK(q == doctest::Approx(338.456905315152).epsilon(1e-13));
  }
  SUBCASE("m = 0 single term") {
    const auto sys = build_neighborhoods(1, 0);
    const auto p = ScoreMomentProfile::uniform(1, 1.0, 3.0);
    CHECK(q_term(1, sys, p) == doctest::Approx(8.29106492147843).epsilon(1e-13));
    CHECK(q_sum(sys, p) == doctest::Approx(8.29106492147843).epsilon(1e-13));
  }
  SUBCASE("block-sum moments n = 10, k = 1, index 1") {
    std::vector<double> m2(10, 10.0 / 9.0), m4(10, 100.0 / 27.0);
    m2[0] = 10.0 / 3.0;
    m4[0] = 100.0 / 3.0;
    const auto sys = build_neighborhoods(10, 1);
    const auto p = ScoreMomentProfile::from_values(m2, m4);
    // Reference values from a direct triple sum in extended precision.
    CHECK(q_term(1, sys, p) == doctest::Approx(10.667713210064882).epsilon(1e-13));
    CHECK(q_sum(sys, p) == doctest::Approx(103.63285528275148).epsilon(1e-13));
    CHECK(q_components(1, sys, p).jensen == doctest::Approx(5.0 / 3.0).epsilon(1e-13));
  }
  SUBCASE("all-zero moments") {
    const auto sys = build_neighborhoods(20, 2);
    const auto p = ScoreMomentProfile::uniform(20, 0.0, 0.0);
    CHECK(q_sum(sys, p) == 0.0);
  }
  SUBCASE("subnormal moments are flushed, not NaN") {
    const auto sys = build_neighborhoods(5, 1);
    const auto p = ScoreMomentProfile::uniform(5, 1e-310, 1e-310);
    CHECK(q_sum(sys, p) == 0.0);
  }
}

TEST_CASE("q_term errors") {
  const auto sys = build_neighborhoods(5, 1);
  const auto p = ScoreMomentProfile::uniform(5, 1.0, 3.0);
  CHECK_THROWS_AS(q_term(0, sys, p), std::out_of_range);
  CHECK_THROWS_AS(q_term(6, sys, p), std::out_of_range);
  const auto wrong = ScoreMomentProfile::uniform(6, 1.0, 3.0);
  CHECK_THROWS_AS(q_term(1, sys, wrong), std::invalid_argument);
  CHECK_THROWS_AS(q_sum(sys, wrong), std::invalid_argument);
}

TEST_CASE("q_term matches the brute-force triple sum on random profiles") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_real_distribution<double> kurt(1.0, 6.0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + gen() % 60;
    const std::size_t m = gen() % 5;
    std::vector<double> m2(n), m4(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Short constant stretches exercise the run-length paths.
      m2[i] = (i > 0 && gen() % 3 == 0) ? m2[i - 1] : u(gen);
      m4[i] = (i > 0 && m2[i] == m2[i - 1]) ? m4[i - 1] : kurt(gen) * m2[i] * m2[i];
    }
    const auto sys = build_neighborhoods(n, m);
    const auto p = ScoreMomentProfile::from_values(m2, m4);
    for (std::size_t v = 1; v <= n; ++v) {
      const auto ref = oracle::q_term(v, m, m2, m4);
      const auto got = q_components(v, sys, p);
      REQUIRE(got.fourth_moment == doctest::Approx(ref.fourth).epsilon(1e-12));
      REQUIRE(got.second_moment == doctest::Approx(ref.second).epsilon(1e-12));
      REQUIRE(got.jensen == doctest::Approx(ref.jensen).epsilon(1e-12));
      REQUIRE(q_term(v, sys, p) == doctest::Approx(ref.total()).epsilon(1e-12));
    }
    const double ref_sum = oracle::q_sum(m, m2, m4);
    REQUIRE(q_sum(sys, p) == doctest::Approx(ref_sum).epsilon(1e-12));
    REQUIRE(q_sum_serial(sys, p) == doctest::Approx(ref_sum).epsilon(1e-12));
  }
}

TEST_CASE("q_sum_range splits the total") {
  const auto sys = build_neighborhoods(50, 2);
  std::vector<double> m2(50), m4(50);
  for (int i = 0; i < 50; ++i) {
    m2[i] = 1.0 + 0.01 * i;
    m4[i] = 3.5 * m2[i] * m2[i];
  }
  const auto p = ScoreMomentProfile::from_values(m2, m4);
  const double whole = q_sum(sys, p);
  CHECK(q_sum_range(sys, p, 1, 17) + q_sum_range(sys, p, 18, 50) ==
        doctest::Approx(whole).epsilon(1e-13));
  CHECK(q_sum_range(sys, p, 30, 29) == 0.0);
}

TEST_CASE("m = 0 reduction") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  const std::size_t n = 25;
  std::vector<double> m2(n), m4(n);
  for (std::size_t i = 0; i < n; ++i) {
    m2[i] = u(gen);
    m4[i] = m2[i] * m2[i] * (1.0 + u(gen));
  }
  const auto sys = build_neighborhoods(n, 0);
  const auto p = ScoreMomentProfile::from_values(m2, m4);
  for (std::size_t v = 1; v <= n; ++v) {
    const double a = m2[v - 1], b = m4[v - 1];
    const double expect = std::pow(static_cast<double>(n), -1.5) *
                          (2 * std::pow(b, 0.75) + 2 * std::pow(a, 1.5) + std::sqrt(a * b));
    CHECK(q_term(v, sys, p) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("q_term is non-decreasing in every moment entry") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  const std::size_t n = 15, m = 1;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> m2(n), m4(n);
    for (std::size_t i = 0; i < n; ++i) {
      m2[i] = u(gen);
      m4[i] = 3.0 * m2[i] * m2[i];
    }
    const auto sys = build_neighborhoods(n, m);
    const auto base = ScoreMomentProfile::from_values(m2, m4);
    const std::size_t idx = gen() % n;
    auto bigger4 = m4;
    bigger4[idx] *= 1.0 + u(gen);
    auto bigger2 = m2;
    bigger2[idx] *= 1.0 + 0.1 * u(gen);
    // Keep the Lyapunov ordering for the raised second moment.
    auto lifted4 = m4;
    lifted4[idx] = std::max(lifted4[idx], bigger2[idx] * bigger2[idx]);
    const auto p4 = ScoreMomentProfile::from_values(m2, bigger4);
    const auto p2 = ScoreMomentProfile::from_values(bigger2, lifted4);
    const auto p2ref = ScoreMomentProfile::from_values(m2, lifted4);
    for (std::size_t v = 1; v <= n; ++v) {
      CHECK(q_term(v, sys, p4) >= q_term(v, sys, base));
      CHECK(q_term(v, sys, p2) >= q_term(v, sys, p2ref));
    }
  }
}
