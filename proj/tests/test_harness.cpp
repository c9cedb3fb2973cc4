#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>
#include <string>

#include "mlebound/harness.hpp"
#include "mlebound/report.hpp"
#include "mlebound/verify.hpp"

using namespace mlebound;

namespace {

ExperimentSpec spec_for(Command c, std::vector<std::uint64_t> ns, std::uint32_t k = 1) {
  ExperimentSpec s;
  s.command = c;
  s.n_values = std::move(ns);
  s.k_values = {k};
  return s;
}

ResultRow random_row(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  const auto maybe = [&](double v) -> std::optional<double> {
    if (gen() % 4 == 0) return std::nullopt;
    return v;
  };
  ResultRow r;
  r.n = gen();
  r.k = static_cast<std::uint32_t>(gen());
  r.sigma2 = std::ldexp(u(gen), static_cast<int>(gen() % 200) - 100);
  r.mode = gen() % 2 ? BoundMode::normative : BoundMode::paper_closed_form;
  r.q_total = maybe(u(gen) * 1e-7);
  r.term_scale_gap = maybe(std::nextafter(u(gen), 0.0));
  r.term_remainder = maybe(0.0);
  r.term_second_deriv = maybe(std::numeric_limits<double>::denorm_min());
  r.total = maybe(std::numeric_limits<double>::max());
  r.exact_w1 = maybe(1.0 / 3.0);
  r.empirical_w1 = maybe(u(gen));
  if (gen() % 2) r.reps = gen();
  if (gen() % 2) r.seed = gen();
  r.wall_ms = maybe(u(gen));
  r.q_edge = maybe(u(gen));
  r.q_interior = maybe(u(gen));
  if (gen() % 2) r.empirical_ok = gen() % 2 == 0;
  if (gen() % 2) r.bound_ok = gen() % 2 == 0;
  if (gen() % 3 == 0) r.error = "needs n >= 10, got \"5\"";
  return r;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_NOTHROW(spec_for(Command::bound, {10}).validate());
  CHECK_THROWS_AS(spec_for(Command::bound, {}).validate(), SpecError);
  CHECK_THROWS_AS(spec_for(Command::bound, {0}).validate(), SpecError);
  CHECK_THROWS_AS(spec_for(Command::bound, {10}, 0).validate(), SpecError);
  ExperimentSpec s = spec_for(Command::bound, {10});
  s.k_values.clear();
  CHECK_THROWS_AS(s.validate(), SpecError);
  s = spec_for(Command::bound, {10});
  s.sigma2 = -1.0;
  CHECK_THROWS_AS(s.validate(), SpecError);
  s = spec_for(Command::simulate, {10});
  s.reps = 1;
  CHECK_THROWS_AS(s.validate(), SpecError);
  s = spec_for(Command::simulate, {1000000});
  s.reps = 10000;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("budget"), SpecError);
  s.draw_budget = 100000000000ull;
  CHECK_NOTHROW(s.validate());
  CHECK_THROWS_AS(spec_for(Command::rate, {10, 100, 1000}).validate(), SpecError);
  CHECK_THROWS_AS(spec_for(Command::rate, {10, 20, 30, 100}).validate(), SpecError);
  CHECK_NOTHROW(spec_for(Command::rate, {10, 20, 30, 10000}).validate());
  ExperimentSpec v;
  v.command = Command::verify;
  CHECK_NOTHROW(v.validate());
}

TEST_CASE("bound table") {
  const auto rows = run_bound_table(spec_for(Command::bound, {10, 100}));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 10);
  CHECK(*rows[0].exact_w1 == doctest::Approx(0.0253361567564862).epsilon(1e-12));
  CHECK(*rows[0].total >= *rows[0].exact_w1);
  CHECK(*rows[0].bound_ok);
  CHECK_FALSE(rows[0].empirical_w1.has_value());
  CHECK_FALSE(rows[0].wall_ms.has_value());
  CHECK(rows[0].error.empty());
}

TEST_CASE("paper mode rows carry the interior contribution and per-row errors") {
  ExperimentSpec s = spec_for(Command::bound, {5, 10});
  s.mode = BoundMode::paper_closed_form;
  const auto rows = run_bound_table(s);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].error.empty());
  CHECK_FALSE(rows[0].total.has_value());
  CHECK(rows[1].error.empty());
  CHECK(*rows[1].q_interior == doctest::Approx(62.7777777777778).epsilon(1e-12));
}

TEST_CASE("bound columns are identical across sigma2") {
  ExperimentSpec a = spec_for(Command::bound, {10, 50, 1000});
  ExperimentSpec b = a;
  a.sigma2 = 0.25;
  b.sigma2 = 4.0;
  const auto ra = run_bound_table(a), rb = run_bound_table(b);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(*ra[i].total == doctest::Approx(*rb[i].total).epsilon(1e-12));
    CHECK(*ra[i].q_total == doctest::Approx(*rb[i].q_total).epsilon(1e-12));
    CHECK(*ra[i].exact_w1 == doctest::Approx(*rb[i].exact_w1).epsilon(1e-9));
  }
}

TEST_CASE("simulation rows") {
  ExperimentSpec s = spec_for(Command::simulate, {100});
  s.reps = 20000;
  s.seed = 42;
  const auto rows = run_simulation(s);
  REQUIRE(rows.size() == 1);
  const auto& r = rows[0];
  CHECK(*r.reps == 20000);
  CHECK(*r.seed == 42);
  CHECK(std::abs(*r.empirical_w1 - *r.exact_w1) <= std::max(0.02, 3.0 / std::sqrt(20000.0)));
  CHECK(*r.empirical_ok);
  CHECK(*r.bound_ok);

  ExperimentSpec shifted = s;
  shifted.theta0 = 5.0;
  CHECK(run_simulation(shifted) == rows);
}

TEST_CASE("rate fit") {
  SUBCASE("exact power law") {
    std::vector<double> x, y;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
      x.push_back(n);
      y.push_back(7.0 / std::sqrt(n));
    }
    const auto fit = fit_loglog(x, y);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(std::abs(fit.slope + 0.5) < 1e-8);
    CHECK(fit.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    for (double r : fit.residuals) CHECK(std::abs(r) < 1e-10);
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(fit_loglog({1.0}, {1.0}), SpecError);
    CHECK_THROWS_AS(fit_loglog({1.0, 1.0}, {1.0, 2.0}), SpecError);
    CHECK_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, 0.0}), SpecError);
  }
  SUBCASE("bound slope") {
    for (std::uint32_t k : {1u, 2u}) {
      const auto fit = run_rate_fit(spec_for(Command::rate, {1000, 10000, 100000, 1000000, 10000000}, k));
      CHECK(fit.slope >= -0.55);
      CHECK(fit.slope <= -0.45);
      CHECK(fit.scale_gap_slope >= -1.1);
      CHECK(fit.scale_gap_slope <= -0.9);
      CHECK(fit.points.size() == 5);
    }
  }
}

TEST_CASE("CSV and JSON round trips") {
  std::mt19937_64 gen(1234);
  std::vector<ResultRow> rows;
  for (int i = 0; i < 200; ++i) rows.push_back(random_row(gen));
  CHECK(rows_from_csv(rows_to_csv(rows)) == rows);
  CHECK(rows_from_json(rows_to_json(rows)) == rows);
  const auto real = run_bound_table(spec_for(Command::bound, {10, 123, 99999}, 3));
  CHECK(rows_from_csv(rows_to_csv(real)) == real);
  CHECK(rows_from_json(rows_to_json(real)) == real);
}

TEST_CASE("CSV layout") {
  const auto rows = run_bound_table(spec_for(Command::bound, {10}));
  const auto csv = rows_to_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) == kCsvColumns);
  CHECK(std::string(kCsvColumns).rfind("n,k,sigma2,mode,q_total,term_scale_gap,term_remainder,"
                                       "term_second_deriv,total,exact_w1,empirical_w1,reps,seed,wall_ms",
                                       0) == 0);
  CHECK_THROWS_AS(rows_from_csv("bad header\n"), std::runtime_error);
  CHECK_THROWS_AS(rows_from_json("{"), std::runtime_error);
  CHECK(parse_mode("paper") == BoundMode::paper_closed_form);
  CHECK(parse_mode("paper-closed-form") == BoundMode::paper_closed_form);
  CHECK_THROWS_AS(parse_mode("other"), SpecError);
}

TEST_CASE("verify suite") {
  ExperimentSpec s;
  s.command = Command::verify;
  s.n_values = {10, 20};
  s.k_values = {1, 2};
  const auto report = run_verify(s);
  CHECK_FALSE(report.has_violations());
  CHECK(report.to_text().find("FAIL") == std::string::npos);

  // Q_1's Jensen component is the documented discrepancy; everything else matches.
  for (const auto& c : report.comparisons) {
    const bool expected_mismatch = c.index == 1 && c.component != "moment";
    CHECK_MESSAGE(c.matches != expected_mismatch, "Q_" << c.index << " " << c.component);
  }
  const auto cmp = compare_closed_forms(10, 1);
  const auto it = std::find_if(cmp.begin(), cmp.end(), [](const QComparison& c) {
    return c.index == 1 && c.component == "total";
  });
  REQUIRE(it != cmp.end());
  CHECK(it->generic == doctest::Approx(10.667713210064882).epsilon(1e-12));
  CHECK(it->printed == doctest::Approx(10.334379876731548).epsilon(1e-12));
  CHECK(it->signed_rel_diff < 0.0);
}
