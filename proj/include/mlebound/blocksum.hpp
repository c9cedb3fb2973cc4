#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlebound/bound.hpp"
#include "mlebound/lemma.hpp"
#include "mlebound/moments.hpp"

namespace mlebound {

/// Overlapping Gaussian block sums S_j = X_{(j-1)k} + ... + X_{jk}, j = 1..n,
/// with X_0..X_{nk} i.i.d. N(theta0, sigma2). Neighbouring blocks share one
/// summand, so (S_j) is 1-dependent.
struct BlockSumConfig {
  std::size_t n = 10;
  std::uint32_t k = 1;
  double theta0 = 0.0;
  double sigma2 = 1.0;

  // Throws std::invalid_argument unless n >= 1, k >= 1, sigma2 > 0 and theta0 finite.
  void validate() const;
  // Base variables drawn per replicate: nk + 1.
  std::uint64_t draws_per_replicate() const;
};

struct BlockSumClosedForms {
  double var_mle = 0.0;
  double var_score = 0.0;
  double i2 = 0.0;
  double alpha = 0.0;
  double xi1_m2 = 0.0;
  double xi1_m4 = 0.0;
  double xii_m2 = 0.0;
  double xii_m4 = 0.0;
  double s_d = 0.0;
  double mse_mle = 0.0;
  double sq_dev_second = 0.0;
  double rho = 0.0;
};

// nk^3 + (3n+2)k^2 + 10k + 2, the common denominator of the example.
double blocksum_denominator(std::size_t n, std::uint32_t k);
// Exact variance factor: Var mle = sigma2 F/((nk+2)^2(k+1)^2), Var l' = F/((k+2)^2 sigma2).
// Equals blocksum_denominator for n >= 3; n = 1 and n = 2 differ.
double blocksum_variance_factor(std::size_t n, std::uint32_t k);

BlockSumClosedForms closed_forms(const BlockSumConfig& config);

/// Index 1 gets (E xi_1^2, E xi_1^4); indices 2..n get (E xi_i^2, E xi_i^4).
ScoreMomentProfile moment_profile(const BlockSumConfig& config);

TheoremInputs theorem_inputs(const BlockSumConfig& config);

/// (k sum S + S_1 + S_n) / ((nk+2)(k+1)). Throws on empty input.
double mle(std::span<const double> blocks, std::uint32_t k);

/// l'(theta; S) = (k sum S + S_1 + S_n - (k+1)(nk+2) theta) / ((k+2) sigma2).
double score(double theta, std::span<const double> blocks, std::uint32_t k, double sigma2);

/// l''(theta; S), constant in theta and S.
double second_derivative(std::size_t n, std::uint32_t k, double sigma2);

/// l'''(theta; S) = 0.
constexpr double third_derivative() { return 0.0; }

struct ConditionalLaw {
  double mean = 0.0;
  double variance = 0.0;
};

/// Law of S_i given S_{i-1} = s_prev.
ConditionalLaw conditional_params(double s_prev, std::uint32_t k, double theta, double sigma2);

/// Replicate-by-block matrix of S. Deterministic in (config, reps, seed) and
/// independent of the worker count.
ReplicateMatrix simulate_paths(const BlockSumConfig& config, std::size_t reps, std::uint64_t seed);
ReplicateMatrix simulate_paths_serial(const BlockSumConfig& config, std::size_t reps,
                                      std::uint64_t seed);

/// Alternative simulator: S_1 from its marginal, then S_i | S_{i-1} from
/// conditional_params. Matches the pairwise law of neighbouring blocks only.
ReplicateMatrix simulate_paths_sequential(const BlockSumConfig& config, std::size_t reps,
                                          std::uint64_t seed);

struct ReplicateSummary {
  double mle_error = 0.0;  // mle - theta0
  double score = 0.0;      // l'(theta0; S)
};

/// Per-replicate (mle - theta0, l'(theta0)) on the same streams as simulate_paths,
/// without materializing the paths. Both statistics are computed from the
/// centred block sums, so they do not depend on theta0.
std::vector<ReplicateSummary> simulate_summaries(const BlockSumConfig& config, std::size_t reps,
                                                 std::uint64_t seed);
std::vector<ReplicateSummary> simulate_summaries_serial(const BlockSumConfig& config,
                                                        std::size_t reps, std::uint64_t seed);

/// xi_i / sqrt(n) for one block vector, evaluated at theta0. Their sum is
/// l'(theta0)/sqrt(Var l').
std::vector<double> standardized_scores(const BlockSumConfig& config, std::span<const double> blocks);
ReplicateMatrix standardized_score_paths(const BlockSumConfig& config, const ReplicateMatrix& blocks);

/// Printed closed forms for Q_1..Q_5, split into the part carrying the
/// (1 + 3^{3/4}) factor (fourth- plus second-moment terms) and the part
/// carrying sqrt(3) (the Jensen term).
struct PaperQParts {
  double moment_part = 0.0;
  double jensen_part = 0.0;
  double total() const { return moment_part + jensen_part; }
};

// Throws std::invalid_argument for i outside 1..5 or n < 10.
PaperQParts q_closed_paper_parts(int i, std::size_t n, std::uint32_t k);
double q_closed_paper(int i, std::size_t n, std::uint32_t k);

/// 339 [k(k+1)(k+2)/D]^{3/2}: the printed per-index bound for indices >= 6.
double q_interior_bound(std::size_t n, std::uint32_t k);

/// Exact interior constant 90 + 90 3^{3/4} + 25 sqrt(3).
double interior_constant();

/// The corollary's aggregated brace for indices 1..5 as printed.
PaperQParts corollary_edge_display(std::size_t n, std::uint32_t k);

/// |(1 - 2/(nk+2)) sqrt((k+3+2/n+10/(nk)+2/(nk^2))/(k+3)) - 1|.
double paper_scale_gap(std::size_t n, std::uint32_t k);

enum class BoundMode { normative, paper_closed_form };

struct CorollaryBound {
  BoundBreakdown bound;
  double q_edge = 0.0;      // indices 1..5
  double q_interior = 0.0;  // indices 6..n
};

/// Normative: the general bound evaluated index by index with the model's
/// closed-form moments. Paper-closed-form: printed Q_1..Q_5 plus (n-5) times
/// the interior bound plus the printed scale gap; needs n >= 10.
CorollaryBound corollary_bound(const BlockSumConfig& config, BoundMode mode);
CorollaryBound corollary_bound(std::size_t n, std::uint32_t k, BoundMode mode);

}  // namespace mlebound
