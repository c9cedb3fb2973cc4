#pragma once

#include <span>
#include <vector>

namespace mlebound {

struct NormalParams {
  double mean = 0.0;
  double sd = 1.0;

  // Throws std::invalid_argument for negative sd or non-finite fields.
  void validate() const;
};

/// Finite samples, optionally known to be sorted ascending.
class SampleSet {
 public:
  // Throws std::invalid_argument on non-finite values.
  explicit SampleSet(std::vector<double> values, bool sorted = false);

  std::span<const double> values() const { return values_; }
  bool is_sorted() const { return sorted_; }
  std::size_t size() const { return values_.size(); }

  SampleSet sorted() const;

 private:
  std::vector<double> values_;
  bool sorted_;
};

double std_normal_pdf(double x);
double std_normal_cdf(double x);
// Upper tail 1 - Phi(x), accurate for large x.
double std_normal_sf(double x);

/// Inverse of the standard normal CDF (Wichura's AS241, about 1e-16 relative).
/// Throws std::domain_error for p outside (0, 1).
double std_normal_quantile(double p);

/// W1 between two normal laws: E|delta + s Z| with delta the mean gap and s the
/// sd gap (the comonotone coupling, optimal on the line).
double exact_w1_normal(const NormalParams& a, const NormalParams& b);

/// Integral of |F_emp - Phi| over the real line, evaluated exactly on each
/// order-statistic interval through the antiderivative x Phi(x) + phi(x).
/// OpenMP-parallel; independent of the worker count.
/// Throws std::invalid_argument on an empty sample set.
double empirical_w1_std_normal(const SampleSet& samples);

/// Serial reference for empirical_w1_std_normal.
double empirical_w1_std_normal_serial(const SampleSet& samples);

/// Quantile-coupling estimate (1/N) sum |x_(i) - Phi^{-1}((i - 0.5)/N)|.
double quantile_coupling_w1(const SampleSet& samples);

}  // namespace mlebound
