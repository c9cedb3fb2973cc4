#include "mlebound/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlebound/wasserstein.hpp"

namespace mlebound {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

BlockSumConfig config_for(const ExperimentSpec& spec, std::uint64_t n) {
  return {static_cast<std::size_t>(n), spec.k(), spec.theta0, spec.sigma2};
}

void fill_bound(ResultRow& row, const CorollaryBound& cb) {
  row.q_total = cb.bound.q_total;
  row.term_scale_gap = cb.bound.term_scale_gap;
  row.term_remainder = cb.bound.term_remainder;
  row.term_second_deriv = cb.bound.term_second_deriv;
  row.total = cb.bound.total;
  row.q_edge = cb.q_edge;
  row.q_interior = cb.q_interior;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (command != Command::verify && n_values.empty()) throw SpecError("--n needs at least one value");
  for (auto n : n_values) {
    if (n < 1) throw SpecError("n values must be positive");
  }
  if (command != Command::verify && k_values.empty()) throw SpecError("--k is required");
  for (auto k : k_values) {
    if (k < 1) throw SpecError("k must be a positive integer");
  }
  if (!(std::isfinite(sigma2) && sigma2 > 0.0)) throw SpecError("--sigma2 must be positive");
  if (!std::isfinite(theta0)) throw SpecError("--theta0 must be finite");
  if (reps < 1) throw SpecError("--reps must be positive");
  if (command == Command::simulate) {
    if (reps < 2) throw SpecError("simulate needs --reps >= 2");
    for (auto n : n_values) {
      const double draws = static_cast<double>(reps) * (static_cast<double>(n) * k() + 1.0);
      if (draws > static_cast<double>(draw_budget)) {
        throw SpecError("simulation of n = " + std::to_string(n) + " needs " +
                        std::to_string(static_cast<std::uint64_t>(draws)) +
                        " draws, over the budget of " + std::to_string(draw_budget));
      }
    }
  }
  if (command == Command::rate) {
    if (n_values.size() < 4) throw SpecError("rate needs at least 4 n values");
    const auto [lo, hi] = std::minmax_element(n_values.begin(), n_values.end());
    if (static_cast<double>(*hi) < 1000.0 * static_cast<double>(*lo)) {
      throw SpecError("rate needs n values spanning at least 3 decades");
    }
  }
}

double exact_true_w1(const BlockSumConfig& config) {
  const auto f = closed_forms(config);
  const double sd = std::sqrt(static_cast<double>(config.n) * f.i2 * f.var_mle);
  return exact_w1_normal({0.0, sd}, {0.0, 1.0});
}

std::vector<ResultRow> run_bound_table(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows;
  for (auto n : spec.n_values) {
    const auto start = Clock::now();
    const auto cfg = config_for(spec, n);
    ResultRow row;
    row.n = n;
    row.k = spec.k();
    row.sigma2 = spec.sigma2;
    row.mode = spec.mode;
    row.exact_w1 = exact_true_w1(cfg);
    try {
      fill_bound(row, corollary_bound(cfg, spec.mode));
      row.bound_ok = *row.total >= *row.exact_w1;
    } catch (const std::invalid_argument& e) {
      row.error = e.what();
    }
    if (spec.timing) row.wall_ms = elapsed_ms(start);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> run_simulation(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows;
  for (auto n : spec.n_values) {
    const auto start = Clock::now();
    const auto cfg = config_for(spec, n);
    const auto f = closed_forms(cfg);
    ResultRow row;
    row.n = n;
    row.k = spec.k();
    row.sigma2 = spec.sigma2;
    row.mode = spec.mode;
    row.reps = spec.reps;
    row.seed = spec.seed;
    row.exact_w1 = exact_true_w1(cfg);

    const auto summaries = simulate_summaries(cfg, spec.reps, spec.seed);
    const double scale = std::sqrt(static_cast<double>(n) * f.i2);
    std::vector<double> scaled(summaries.size());
    std::transform(summaries.begin(), summaries.end(), scaled.begin(),
                   [scale](const ReplicateSummary& s) { return scale * s.mle_error; });
    row.empirical_w1 = empirical_w1_std_normal(SampleSet(std::move(scaled)));
    const double tolerance = std::max(0.02, 3.0 / std::sqrt(static_cast<double>(spec.reps)));
    row.empirical_ok = std::abs(*row.empirical_w1 - *row.exact_w1) <= tolerance;

    try {
      fill_bound(row, corollary_bound(cfg, spec.mode));
      row.bound_ok = *row.total >= *row.exact_w1;
    } catch (const std::invalid_argument& e) {
      row.error = e.what();
    }
    if (spec.timing) row.wall_ms = elapsed_ms(start);
    rows.push_back(std::move(row));
  }
  return rows;
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw SpecError("log-log fit needs matching points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw SpecError("log-log fit needs positive values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double m = static_cast<double>(x.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw SpecError("log-log fit needs at least two distinct x values");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    fit.residuals.push_back(r);
    rss += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return fit;
}

RateFit run_rate_fit(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::uint64_t> ns = spec.n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  RateFit out;
  out.k = spec.k();
  out.mode = spec.mode;
  std::vector<double> xs, totals, gaps;
  for (auto n : ns) {
    CorollaryBound cb;
    try {
      cb = corollary_bound(config_for(spec, n), spec.mode);
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what());
    }
    xs.push_back(static_cast<double>(n));
    totals.push_back(cb.bound.total);
    gaps.push_back(cb.bound.term_scale_gap);
    out.points.push_back({n, cb.bound.total, cb.bound.term_scale_gap, 0.0, 0.0});
  }
  const LogLogFit fit = fit_loglog(xs, totals);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.r_squared = fit.r_squared;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    out.points[i].residual = fit.residuals[i];
    out.points[i].fitted_log_total = fit.intercept + fit.slope * std::log(xs[i]);
  }
  const bool gaps_positive = std::all_of(gaps.begin(), gaps.end(), [](double g) { return g > 0.0; });
  out.scale_gap_slope = gaps_positive ? fit_loglog(xs, gaps).slope
                                      : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace mlebound
