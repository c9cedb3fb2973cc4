#include "mlebound/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mlebound/parallel.hpp"

namespace mlebound {

namespace {

void check_paths(const ReplicateMatrix& paths, const NeighborhoodSystem& system) {
  if (paths.rows() < 2) throw std::invalid_argument("lemma estimate needs at least 2 replicates");
  if (paths.cols() != system.size()) {
    throw std::invalid_argument("path length differs from the neighborhood system size");
  }
  for (double x : paths.data()) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite entry in replicate paths");
  }
}

// Per-index sums over replicates.
struct IndexSums {
  explicit IndexSums(std::size_t n) : abs_xet(n), xe(n), abs_tau(n), abs_xee(n) {}

  void add(const IndexSums& o) {
    for (std::size_t i = 0; i < xe.size(); ++i) {
      abs_xet[i] += o.abs_xet[i];
      xe[i] += o.xe[i];
      abs_tau[i] += o.abs_tau[i];
      abs_xee[i] += o.abs_xee[i];
    }
  }

  std::vector<double> abs_xet;  // |x eta tau|
  std::vector<double> xe;       // x eta
  std::vector<double> abs_tau;  // |tau|
  std::vector<double> abs_xee;  // |x eta^2|
};

double window_sum(std::span<const double> row, const Interval& w) {
  double s = 0.0;
  for (std::size_t j = w.first; j <= w.last; ++j) s += row[j - 1];
  return s;
}

// Fills x_i eta_i and tau_i for one replicate.
void row_products(std::span<const double> row, const NeighborhoodSystem& system,
                  std::span<double> xe, std::span<double> tau, std::span<double> eta) {
  for (std::size_t i = 1; i <= row.size(); ++i) {
    const double e = window_sum(row, system.A(i));
    eta[i - 1] = e;
    xe[i - 1] = row[i - 1] * e;
    tau[i - 1] = window_sum(row, system.B(i));
  }
}

void accumulate_row(std::span<const double> row, const NeighborhoodSystem& system,
                    IndexSums& sums, std::vector<double>& xe, std::vector<double>& tau,
                    std::vector<double>& eta) {
  row_products(row, system, xe, tau, eta);
  for (std::size_t i = 0; i < row.size(); ++i) {
    sums.abs_xet[i] += std::abs(xe[i] * tau[i]);
    sums.xe[i] += xe[i];
    sums.abs_tau[i] += std::abs(tau[i]);
    sums.abs_xee[i] += std::abs(xe[i] * eta[i]);
  }
}

struct Means {
  std::vector<double> xe;
  std::vector<double> abs_tau;
};

// Linearized per-replicate contribution to lemma_total.
double replicate_influence(std::span<const double> row, const NeighborhoodSystem& system,
                           const Means& means, std::vector<double>& xe, std::vector<double>& tau,
                           std::vector<double>& eta) {
  row_products(row, system, xe, tau, eta);
  double y = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double mu = means.xe[i];
    const double sign = mu > 0.0 ? 1.0 : (mu < 0.0 ? -1.0 : 0.0);
    y += 2.0 * std::abs(xe[i] * tau[i]) + std::abs(xe[i] * eta[i]) +
         2.0 * (sign * means.abs_tau[i] * xe[i] + std::abs(mu) * std::abs(tau[i]));
  }
  return y;
}

LemmaTermEstimate finish(const IndexSums& sums, std::size_t reps, Means& means,
                         std::span<const double> influence) {
  const double inv = 1.0 / static_cast<double>(reps);
  LemmaTermEstimate est;
  est.replicate_count = reps;
  for (std::size_t i = 0; i < sums.xe.size(); ++i) {
    est.term_xi_eta_tau += sums.abs_xet[i] * inv;
    est.term_cov_abs += std::abs(means.xe[i]) * means.abs_tau[i];
    est.term_xi_eta_sq += sums.abs_xee[i] * inv;
  }
  est.lemma_total = 2.0 * (est.term_xi_eta_tau + est.term_cov_abs) + est.term_xi_eta_sq;

  const double mean_y = ordered_sum(influence) * inv;
  double ss = 0.0;
  for (double y : influence) ss += (y - mean_y) * (y - mean_y);
  const double var = ss / static_cast<double>(reps - 1);
  est.standard_error_total = std::sqrt(var * inv);
  return est;
}

Means means_of(const IndexSums& sums, std::size_t reps) {
  const double inv = 1.0 / static_cast<double>(reps);
  Means m{sums.xe, sums.abs_tau};
  for (auto& v : m.xe) v *= inv;
  for (auto& v : m.abs_tau) v *= inv;
  return m;
}

}  // namespace

LemmaTermEstimate lemma_terms_mc(const ReplicateMatrix& paths, const NeighborhoodSystem& system) {
  check_paths(paths, system);
  const std::size_t n = paths.cols();
  const std::size_t reps = paths.rows();
  const std::size_t chunks = chunk_count(reps, kReplicateChunk);

  std::vector<IndexSums> partial(chunks, IndexSums(n));
#pragma omp parallel
  {
    std::vector<double> xe(n), tau(n), eta(n);
#pragma omp for schedule(static)
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t hi = std::min(reps, (c + 1) * kReplicateChunk);
      for (std::size_t r = c * kReplicateChunk; r < hi; ++r) {
        accumulate_row(paths.row(r), system, partial[c], xe, tau, eta);
      }
    }
  }
  IndexSums sums(n);
  for (const auto& p : partial) sums.add(p);

  Means means = means_of(sums, reps);
  std::vector<double> influence(reps);
#pragma omp parallel
  {
    std::vector<double> xe(n), tau(n), eta(n);
#pragma omp for schedule(static)
    for (std::size_t r = 0; r < reps; ++r) {
      influence[r] = replicate_influence(paths.row(r), system, means, xe, tau, eta);
    }
  }
  return finish(sums, reps, means, influence);
}

LemmaTermEstimate lemma_terms_mc_serial(const ReplicateMatrix& paths,
                                        const NeighborhoodSystem& system) {
  check_paths(paths, system);
  const std::size_t n = paths.cols();
  const std::size_t reps = paths.rows();
  std::vector<double> xe(n), tau(n), eta(n);
  IndexSums sums(n);
  for (std::size_t r = 0; r < reps; ++r) accumulate_row(paths.row(r), system, sums, xe, tau, eta);
  Means means = means_of(sums, reps);
  std::vector<double> influence(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    influence[r] = replicate_influence(paths.row(r), system, means, xe, tau, eta);
  }
  return finish(sums, reps, means, influence);
}

ScoreMomentProfile empirical_moment_profile(const ReplicateMatrix& paths) {
  if (paths.rows() == 0 || paths.cols() == 0) {
    throw std::invalid_argument("empirical moments need a non-empty path matrix");
  }
  const std::size_t n = paths.cols();
  const double nd = static_cast<double>(n);
  std::vector<double> m2(n, 0.0), m3(n, 0.0), m4(n, 0.0);
  for (std::size_t r = 0; r < paths.rows(); ++r) {
    const auto row = paths.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const double x2 = row[i] * row[i];
      m2[i] += x2;
      m3[i] += x2 * std::abs(row[i]);
      m4[i] += x2 * x2;
    }
  }
  const double inv = 1.0 / static_cast<double>(paths.rows());
  for (std::size_t i = 0; i < n; ++i) {
    m2[i] *= nd * inv;
    m3[i] *= std::pow(nd, 1.5) * inv;
    m4[i] *= nd * nd * inv;
  }
  return ScoreMomentProfile::from_values(m2, m4, m3);
}

}  // namespace mlebound
