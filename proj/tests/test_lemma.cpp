#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "mlebound/blocksum.hpp"
#include "mlebound/lemma.hpp"
#include "mlebound/q_terms.hpp"
#include "mlebound/rng.hpp"
#include "oracles.hpp"

using namespace mlebound;

namespace {

ReplicateMatrix iid_normal_paths(std::size_t reps, std::size_t n, std::uint64_t seed) {
  ReplicateMatrix paths(reps, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t r = 0; r < reps; ++r) {
    ReplicateStream rs(seed, r);
    for (std::size_t i = 0; i < n; ++i) paths(r, i) = scale * rs.normal();
  }
  return paths;
}

std::vector<std::vector<double>> to_rows(const ReplicateMatrix& m) {
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
  return rows;
}

}  // namespace

TEST_CASE("lemma terms match the explicit-loop oracle") {
  std::mt19937_64 gen(5);
  std::student_t_distribution<double> heavy(5.0);
  for (std::size_t m : {0u, 1u, 2u}) {
    const std::size_t n = 13, reps = 300;
    ReplicateMatrix paths(reps, n);
    for (std::size_t r = 0; r < reps; ++r) {
      for (std::size_t i = 0; i < n; ++i) paths(r, i) = 0.3 * heavy(gen) + (i % 3 == 0 ? 0.1 : 0.0);
    }
    const auto sys = build_neighborhoods(n, m);
    const auto ref = oracle::lemma(to_rows(paths), m);
    for (const auto& est : {lemma_terms_mc(paths, sys), lemma_terms_mc_serial(paths, sys)}) {
      CHECK(est.term_xi_eta_tau == doctest::Approx(ref.xi_eta_tau).epsilon(1e-12));
      CHECK(est.term_cov_abs == doctest::Approx(ref.cov_abs).epsilon(1e-12));
      CHECK(est.term_xi_eta_sq == doctest::Approx(ref.xi_eta_sq).epsilon(1e-12));
      CHECK(est.lemma_total ==
            2.0 * (est.term_xi_eta_tau + est.term_cov_abs) + est.term_xi_eta_sq);
      CHECK(est.replicate_count == reps);
      CHECK(est.standard_error_total > 0.0);
    }
  }
}

TEST_CASE("all-zero paths give zero terms") {
  const ReplicateMatrix paths(10, 7);
  const auto est = lemma_terms_mc(paths, build_neighborhoods(7, 1));
  CHECK(est.lemma_total == 0.0);
  CHECK(est.term_xi_eta_tau == 0.0);
  CHECK(est.term_cov_abs == 0.0);
  CHECK(est.term_xi_eta_sq == 0.0);
  CHECK(est.standard_error_total == 0.0);
}

TEST_CASE("lemma errors") {
  const auto sys = build_neighborhoods(4, 0);
  CHECK_THROWS_AS(lemma_terms_mc(ReplicateMatrix(1, 4), sys), std::invalid_argument);
  CHECK_THROWS_AS(lemma_terms_mc(ReplicateMatrix(5, 3), sys), std::invalid_argument);
  ReplicateMatrix bad(5, 4);
  bad(2, 1) = INFINITY;
  CHECK_THROWS_AS(lemma_terms_mc(bad, sys), std::invalid_argument);
  CHECK_THROWS_AS(lemma_terms_mc_serial(bad, sys), std::invalid_argument);
}

TEST_CASE("i.i.d. normal summands: lemma total near 8 sqrt(2/pi)/sqrt(n)") {
  const auto paths = iid_normal_paths(20000, 100, 2024);
  const auto est = lemma_terms_mc(paths, build_neighborhoods(100, 0));
  const double expect = 6.38307648642292 / 10.0;
  CHECK(std::abs(est.lemma_total - expect) <= 3.0 * est.standard_error_total);
  CHECK(est.standard_error_total < 0.01);
}

TEST_CASE("standard error shrinks like 1/sqrt(reps)") {
  const auto sys = build_neighborhoods(20, 0);
  const auto small = lemma_terms_mc(iid_normal_paths(1000, 20, 1), sys);
  const auto large = lemma_terms_mc(iid_normal_paths(16000, 20, 1), sys);
  const double ratio = small.standard_error_total / large.standard_error_total;
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("empirical moment profile") {
  const auto paths = iid_normal_paths(50000, 4, 8);
  const auto p = empirical_moment_profile(paths);
  REQUIRE(p.size() == 4);
  REQUIRE(p.has_abs_third());
  for (std::size_t i = 1; i <= 4; ++i) {
    CHECK(p.second(i) == doctest::Approx(1.0).epsilon(0.03));
    CHECK(p.fourth(i) == doctest::Approx(3.0).epsilon(0.06));
    CHECK(*p.abs_third(i) == doctest::Approx(1.5957691216057308).epsilon(0.04));
  }
}

TEST_CASE("dominance: lemma terms <= relaxation from the same replicates") {
  SUBCASE("block-sum standardized scores") {
    const BlockSumConfig cfg{10, 1, 0.0, 1.0};
    const auto paths = standardized_score_paths(cfg, simulate_paths(cfg, 10000, 77));
    const auto sys = build_neighborhoods(cfg.n, 1);
    const auto est = lemma_terms_mc(paths, sys);
    CHECK(est.lemma_total <= q_sum(sys, empirical_moment_profile(paths)) + 3 * est.standard_error_total);
    CHECK(est.lemma_total <= q_sum(sys, moment_profile(cfg)) + 3 * est.standard_error_total);
  }
  SUBCASE("skewed, heavy-tailed m-dependent moving averages") {
    std::mt19937_64 gen(11);
    std::exponential_distribution<double> expo(1.0);
    for (std::size_t m : {1u, 2u}) {
      const std::size_t n = 30, reps = 4000;
      ReplicateMatrix paths(reps, n);
      for (std::size_t r = 0; r < reps; ++r) {
        std::vector<double> e(n + m);
        for (auto& x : e) x = expo(gen) - 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          double s = 0.0;
          for (std::size_t d = 0; d <= m; ++d) s += e[i + d];
          paths(r, i) = s / std::sqrt(static_cast<double>(n * (m + 1)));
        }
      }
      const auto sys = build_neighborhoods(n, m);
      const auto est = lemma_terms_mc(paths, sys);
      CHECK(est.lemma_total <= q_sum(sys, empirical_moment_profile(paths)) + 3 * est.standard_error_total);
    }
  }
}
