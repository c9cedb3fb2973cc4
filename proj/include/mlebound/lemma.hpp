#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mlebound/moments.hpp"
#include "mlebound/neighborhoods.hpp"

namespace mlebound {

/// Row-major replicate-by-index matrix. Row r holds one realization.
class ReplicateMatrix {
 public:
  ReplicateMatrix() = default;
  ReplicateMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }

  friend bool operator==(const ReplicateMatrix&, const ReplicateMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Replicate-mean estimates of the three expectations in the local-dependence
/// Stein bound for W = sum_i x_i, with eta_i = sum_{A_i} x_j, tau_i = sum_{B_i} x_j.
struct LemmaTermEstimate {
  double term_xi_eta_tau = 0.0;  // sum_i E|x_i eta_i tau_i|
  double term_cov_abs = 0.0;     // sum_i |E(x_i eta_i)| E|tau_i|
  double term_xi_eta_sq = 0.0;   // sum_i E|x_i eta_i^2|
  double lemma_total = 0.0;      // 2(term_xi_eta_tau + term_cov_abs) + term_xi_eta_sq
  std::size_t replicate_count = 0;
  double standard_error_total = 0.0;
};

/// Rows of `paths` are realizations of (xi_1/sqrt(n), ..., xi_n/sqrt(n)).
/// The product term |E(x eta)| E|tau| enters the standard error through its
/// first-order (delta-method) linearization.
/// Throws std::invalid_argument on fewer than 2 replicates, a column count
/// different from system.size(), or non-finite entries.
LemmaTermEstimate lemma_terms_mc(const ReplicateMatrix& paths, const NeighborhoodSystem& system);

/// Serial reference for lemma_terms_mc.
LemmaTermEstimate lemma_terms_mc_serial(const ReplicateMatrix& paths,
                                        const NeighborhoodSystem& system);

/// Per-index empirical E(xi_i^2), E(xi_i^4) (and E|xi_i|^3) from rows of xi_i/sqrt(n).
ScoreMomentProfile empirical_moment_profile(const ReplicateMatrix& paths);

}  // namespace mlebound
