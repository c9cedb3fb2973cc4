#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlebound/blocksum.hpp"

namespace mlebound {

enum class Command { bound, simulate, rate, verify };
enum class OutputFormat { csv, json };

/// An invalid experiment description (CLI exit code 1).
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentSpec {
  Command command = Command::bound;
  std::vector<std::uint64_t> n_values;
  std::vector<std::uint32_t> k_values;  // bound/simulate/rate use the first entry
  double sigma2 = 1.0;
  double theta0 = 0.0;
  std::uint64_t reps = 10000;
  std::uint64_t seed = 0;
  BoundMode mode = BoundMode::normative;
  OutputFormat format = OutputFormat::csv;
  std::string out_path;               // empty: standard output
  std::uint64_t draw_budget = 1000000000;  // cap on reps * (nk + 1) per n
  bool timing = false;                // fill wall_ms (makes output run-dependent)

  std::uint32_t k() const { return k_values.front(); }
  // Throws SpecError.
  void validate() const;
};

struct ResultRow {
  std::uint64_t n = 0;
  std::uint32_t k = 0;
  double sigma2 = 1.0;
  BoundMode mode = BoundMode::normative;
  std::optional<double> q_total;
  std::optional<double> term_scale_gap;
  std::optional<double> term_remainder;
  std::optional<double> term_second_deriv;
  std::optional<double> total;
  std::optional<double> exact_w1;
  std::optional<double> empirical_w1;
  std::optional<std::uint64_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<double> wall_ms;
  // Appended columns.
  std::optional<double> q_edge;
  std::optional<double> q_interior;
  std::optional<bool> empirical_ok;
  std::optional<bool> bound_ok;
  std::string error;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Exact W1 between sqrt(n i2)(mle - theta0) ~ N(0, n i2 Var mle) and N(0,1).
double exact_true_w1(const BlockSumConfig& config);

std::vector<ResultRow> run_bound_table(const ExperimentSpec& spec);
std::vector<ResultRow> run_simulation(const ExperimentSpec& spec);

struct RatePoint {
  std::uint64_t n = 0;
  double total = 0.0;
  double term_scale_gap = 0.0;
  double fitted_log_total = 0.0;
  double residual = 0.0;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares of log(y) on log(x). Throws SpecError on fewer than
/// two points, non-positive values or a constant x.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct RateFit {
  std::uint32_t k = 1;
  BoundMode mode = BoundMode::normative;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double scale_gap_slope = 0.0;
  std::vector<RatePoint> points;
};

/// Needs at least 4 n values spanning at least 3 decades.
RateFit run_rate_fit(const ExperimentSpec& spec);

}  // namespace mlebound
