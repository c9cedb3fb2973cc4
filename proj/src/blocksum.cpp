#include "mlebound/blocksum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mlebound/neighborhoods.hpp"
#include "mlebound/parallel.hpp"
#include "mlebound/q_terms.hpp"
#include "mlebound/rng.hpp"

namespace mlebound {

namespace {

const double kRoot3 = std::sqrt(3.0);
const double kOnePlus3To34 = 1.0 + std::pow(3.0, 0.75);

// Centred block sums S_j - (k+1) theta0 for one replicate, into `out` (size n).
void draw_centred_blocks(const BlockSumConfig& cfg, std::uint64_t seed, std::uint64_t rep,
                         std::span<double> out, std::vector<double>& base) {
  ReplicateStream stream(seed, rep);
  const double sigma = std::sqrt(cfg.sigma2);
  for (auto& x : base) x = sigma * stream.normal();
  const std::size_t k = cfg.k;
  for (std::size_t j = 1; j <= cfg.n; ++j) {
    double s = 0.0;
    for (std::size_t i = (j - 1) * k; i <= j * k; ++i) s += base[i];
    out[j - 1] = s;
  }
}

void check_reps(std::size_t reps) {
  if (reps < 1) throw std::invalid_argument("simulation needs reps >= 1");
}

ReplicateSummary summarize(const BlockSumConfig& cfg, std::span<const double> centred) {
  return {mle(centred, cfg.k), score(0.0, centred, cfg.k, cfg.sigma2)};
}

double pow15(double x) { return x * std::sqrt(x); }

void check_paper_domain(std::size_t n, std::uint32_t k) {
  if (n < 10) {
    throw std::invalid_argument("paper closed forms need n >= 10 (got n = " + std::to_string(n) +
                                ")");
  }
  if (k < 1) throw std::invalid_argument("paper closed forms need k >= 1");
}

}  // namespace

void BlockSumConfig::validate() const {
  if (n < 1) throw std::invalid_argument("block-sum model needs n >= 1");
  if (k < 1) throw std::invalid_argument("block-sum model needs k >= 1");
  if (!(std::isfinite(sigma2) && sigma2 > 0.0)) {
    throw std::invalid_argument("block-sum model needs a finite sigma2 > 0");
  }
  if (!std::isfinite(theta0)) throw std::invalid_argument("theta0 must be finite");
}

std::uint64_t BlockSumConfig::draws_per_replicate() const {
  return static_cast<std::uint64_t>(n) * k + 1;
}

double blocksum_denominator(std::size_t n, std::uint32_t k) {
  const double nd = static_cast<double>(n);
  const double kd = k;
  return nd * kd * kd * kd + (3.0 * nd + 2.0) * kd * kd + 10.0 * kd + 2.0;
}

double blocksum_variance_factor(std::size_t n, std::uint32_t k) {
  const double kd = k;
  // The common denominator assumes distinct first, interior and last blocks.
  if (n == 1) return (kd + 1.0) * (kd + 2.0) * (kd + 2.0);
  if (n == 2) return 2.0 * (kd + 1.0) * (kd + 1.0) * (kd + 2.0);
  return blocksum_denominator(n, k);
}

BlockSumClosedForms closed_forms(const BlockSumConfig& config) {
  config.validate();
  const double n = static_cast<double>(config.n);
  const double k = config.k;
  const double s2 = config.sigma2;
  const double d = blocksum_variance_factor(config.n, config.k);
  const double nk2 = n * k + 2.0;

  BlockSumClosedForms f;
  f.var_mle = s2 * d / (nk2 * nk2 * (k + 1.0) * (k + 1.0));
  f.var_score = d / ((k + 2.0) * (k + 2.0) * s2);
  f.i2 = (k + 1.0) * (k + 1.0) / ((k + 3.0) * s2);
  f.alpha = nk2 * (k + 1.0) / ((k + 2.0) * s2);
  f.xi1_m2 = n * (k + 2.0) * (k + 2.0) * (k + 1.0) / d;
  f.xi1_m4 = 3.0 * n * n * std::pow(k + 2.0, 4) * (k + 1.0) * (k + 1.0) / (d * d);
  f.xii_m2 = n * k * (k + 1.0) * (k + 2.0) / d;
  f.xii_m4 = 3.0 * n * n * k * k * (k + 1.0) * (k + 1.0) * (k + 2.0) * (k + 2.0) / (d * d);
  f.s_d = 0.0;
  f.mse_mle = f.var_mle;
  f.sq_dev_second = 0.0;
  f.rho = 1.0 / (k + 1.0);
  return f;
}

ScoreMomentProfile moment_profile(const BlockSumConfig& config) {
  const auto f = closed_forms(config);
  std::vector<MomentRun> runs{{1, 1, f.xi1_m2, f.xi1_m4, std::nullopt}};
  if (config.n > 1) runs.push_back({2, config.n - 1, f.xii_m2, f.xii_m4, std::nullopt});
  return ScoreMomentProfile::from_runs(std::move(runs));
}

TheoremInputs theorem_inputs(const BlockSumConfig& config) {
  const auto f = closed_forms(config);
  return {config.n, f.var_score, f.var_mle, f.i2, f.s_d, f.mse_mle, f.sq_dev_second};
}

double mle(std::span<const double> blocks, std::uint32_t k) {
  if (blocks.empty()) throw std::invalid_argument("mle needs at least one block");
  const double n = static_cast<double>(blocks.size());
  double sum = 0.0;
  for (double s : blocks) sum += s;
  return (k * sum + blocks.front() + blocks.back()) / ((n * k + 2.0) * (k + 1.0));
}

double score(double theta, std::span<const double> blocks, std::uint32_t k, double sigma2) {
  if (blocks.empty()) throw std::invalid_argument("score needs at least one block");
  const double n = static_cast<double>(blocks.size());
  double sum = 0.0;
  for (double s : blocks) sum += s;
  const double centred = k * sum + blocks.front() + blocks.back() - (k + 1.0) * (n * k + 2.0) * theta;
  return centred / ((k + 2.0) * sigma2);
}

double second_derivative(std::size_t n, std::uint32_t k, double sigma2) {
  const double nd = static_cast<double>(n);
  const double kd = k;
  return -((nd * kd + 2.0) * (kd + 1.0) / ((kd + 2.0) * sigma2));
}

ConditionalLaw conditional_params(double s_prev, std::uint32_t k, double theta, double sigma2) {
  const double kp1 = k + 1.0;
  return {kp1 * theta + (s_prev - kp1 * theta) / kp1, k * (k + 2.0) * sigma2 / kp1};
}

ReplicateMatrix simulate_paths(const BlockSumConfig& config, std::size_t reps, std::uint64_t seed) {
  config.validate();
  check_reps(reps);
  ReplicateMatrix out(reps, config.n);
  const double shift = (config.k + 1.0) * config.theta0;
#pragma omp parallel
  {
    std::vector<double> base(config.draws_per_replicate());
#pragma omp for schedule(static)
    for (std::size_t r = 0; r < reps; ++r) {
      auto row = out.row(r);
      draw_centred_blocks(config, seed, r, row, base);
      for (auto& s : row) s += shift;
    }
  }
  return out;
}

ReplicateMatrix simulate_paths_serial(const BlockSumConfig& config, std::size_t reps,
                                      std::uint64_t seed) {
  config.validate();
  check_reps(reps);
  ReplicateMatrix out(reps, config.n);
  const double shift = (config.k + 1.0) * config.theta0;
  std::vector<double> base(config.draws_per_replicate());
  for (std::size_t r = 0; r < reps; ++r) {
    auto row = out.row(r);
    draw_centred_blocks(config, seed, r, row, base);
    for (auto& s : row) s += shift;
  }
  return out;
}

ReplicateMatrix simulate_paths_sequential(const BlockSumConfig& config, std::size_t reps,
                                          std::uint64_t seed) {
  config.validate();
  check_reps(reps);
  ReplicateMatrix out(reps, config.n);
  const double kp1 = config.k + 1.0;
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < reps; ++r) {
    ReplicateStream stream(seed, r);
    auto row = out.row(r);
    row[0] = kp1 * config.theta0 + std::sqrt(kp1 * config.sigma2) * stream.normal();
    for (std::size_t j = 1; j < config.n; ++j) {
      const auto law = conditional_params(row[j - 1], config.k, config.theta0, config.sigma2);
      row[j] = law.mean + std::sqrt(law.variance) * stream.normal();
    }
  }
  return out;
}

std::vector<ReplicateSummary> simulate_summaries(const BlockSumConfig& config, std::size_t reps,
                                                 std::uint64_t seed) {
  config.validate();
  check_reps(reps);
  std::vector<ReplicateSummary> out(reps);
#pragma omp parallel
  {
    std::vector<double> base(config.draws_per_replicate());
    std::vector<double> blocks(config.n);
#pragma omp for schedule(static)
    for (std::size_t r = 0; r < reps; ++r) {
      draw_centred_blocks(config, seed, r, blocks, base);
      out[r] = summarize(config, blocks);
    }
  }
  return out;
}

std::vector<ReplicateSummary> simulate_summaries_serial(const BlockSumConfig& config,
                                                        std::size_t reps, std::uint64_t seed) {
  config.validate();
  check_reps(reps);
  std::vector<ReplicateSummary> out(reps);
  std::vector<double> base(config.draws_per_replicate());
  std::vector<double> blocks(config.n);
  for (std::size_t r = 0; r < reps; ++r) {
    draw_centred_blocks(config, seed, r, blocks, base);
    out[r] = summarize(config, blocks);
  }
  return out;
}

std::vector<double> standardized_scores(const BlockSumConfig& config,
                                        std::span<const double> blocks) {
  config.validate();
  if (blocks.size() != config.n) throw std::invalid_argument("block vector length differs from n");
  const auto f = closed_forms(config);
  const double kp1 = config.k + 1.0;
  const double mean = kp1 * config.theta0;
  const double scale = 1.0 / std::sqrt(f.var_score);
  std::vector<double> x(config.n);
  x[0] = (blocks[0] - mean) / config.sigma2 * scale;
  const double cond = kp1 / ((config.k + 2.0) * config.sigma2);
  for (std::size_t i = 1; i < config.n; ++i) {
    const double mu = conditional_params(blocks[i - 1], config.k, config.theta0, config.sigma2).mean;
    x[i] = cond * (blocks[i] - mu) * scale;
  }
  return x;
}

ReplicateMatrix standardized_score_paths(const BlockSumConfig& config,
                                         const ReplicateMatrix& blocks) {
  if (blocks.cols() != config.n) throw std::invalid_argument("path width differs from n");
  ReplicateMatrix out(blocks.rows(), blocks.cols());
  for (std::size_t r = 0; r < blocks.rows(); ++r) {
    const auto x = standardized_scores(config, blocks.row(r));
    std::copy(x.begin(), x.end(), out.row(r).begin());
  }
  return out;
}

PaperQParts q_closed_paper_parts(int i, std::size_t n, std::uint32_t k) {
  check_paper_domain(n, k);
  const double kd = k;
  const double d15 = pow15(blocksum_denominator(n, k));
  const double common = pow15(kd + 1.0) * pow15(kd + 2.0) / d15;
  const double rk = std::sqrt(kd);
  const double rkk2 = std::sqrt(kd * (kd + 2.0));
  PaperQParts q;
  switch (i) {
    case 1: {
      const double lead = 2.0 * pow15(kd + 1.0) * (kd + 2.0) * (kd + 2.0) / d15;
      q.moment_part = lead * (9.0 * kd + 2.0 + 6.0 * rkk2) * kOnePlus3To34;
      q.jensen_part = lead * 3.0 * kRoot3 * (kd + 1.0);
      break;
    }
    case 2: {
      const double lead = 4.0 * rk * common;
      q.moment_part = lead * (8.0 * kd + 1.0 + 4.0 * rkk2) * kOnePlus3To34;
      q.jensen_part = lead * 2.0 * kRoot3 * (2.0 * kd + 1.0);
      break;
    }
    case 3: {
      const double lead = rk * common;
      q.moment_part = lead * 2.0 * (25.0 * kd + 2.0 + 10.0 * rkk2) * kOnePlus3To34;
      q.jensen_part = lead * 5.0 * kRoot3 * (5.0 * kd + 2.0);
      break;
    }
    case 4:
    case 5: {
      const double lead = 5.0 * kd * common;
      const double inner = i == 4 ? 7.0 : 8.0;
      q.moment_part = lead * 2.0 * (std::sqrt(kd + 2.0) + inner * rk) * kOnePlus3To34;
      q.jensen_part = lead * 5.0 * std::sqrt(3.0 * kd);
      break;
    }
    default:
      throw std::invalid_argument("printed closed forms exist for indices 1..5 only");
  }
  return q;
}

double q_closed_paper(int i, std::size_t n, std::uint32_t k) {
  return q_closed_paper_parts(i, n, k).total();
}

double q_interior_bound(std::size_t n, std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("q_interior_bound needs k >= 1");
  const double kd = k;
  return 339.0 * pow15(kd * (kd + 1.0) * (kd + 2.0) / blocksum_denominator(n, k));
}

double interior_constant() { return 90.0 + 90.0 * std::pow(3.0, 0.75) + 25.0 * kRoot3; }

PaperQParts corollary_edge_display(std::size_t n, std::uint32_t k) {
  check_paper_domain(n, k);
  const double kd = k;
  const double common = pow15(kd + 1.0) * pow15(kd + 2.0) / pow15(blocksum_denominator(n, k));
  const double rk = std::sqrt(kd);
  const double rk2 = std::sqrt(kd + 2.0);
  return {common * kOnePlus3To34 *
              (2.0 * rk2 * (37.0 * kd + 2.0) + 4.0 * rk * (61.0 * kd + 8.0)),
          common * kRoot3 * (3.0 * rk2 * (kd + 1.0) + rk * (91.0 * kd + 18.0))};
}

double paper_scale_gap(std::size_t n, std::uint32_t k) {
  const double nd = static_cast<double>(n);
  const double kd = k;
  const double ratio =
      (kd + 3.0 + 2.0 / nd + 10.0 / (nd * kd) + 2.0 / (nd * kd * kd)) / (kd + 3.0);
  return std::abs((1.0 - 2.0 / (nd * kd + 2.0)) * std::sqrt(ratio) - 1.0);
}

CorollaryBound corollary_bound(const BlockSumConfig& config, BoundMode mode) {
  config.validate();
  const TheoremInputs inputs = theorem_inputs(config);
  CorollaryBound out;
  if (mode == BoundMode::normative) {
    const auto system = build_neighborhoods(config.n, 1);
    const auto moments = moment_profile(config);
    out.q_edge = q_sum_range(system, moments, 1, 5);
    out.q_interior = q_sum_range(system, moments, 6, config.n);
    out.bound = assemble_bound(out.q_edge + out.q_interior, inputs);
    out.bound.provenance.insert(
        out.bound.provenance.begin() + 1,
        {{"  generic Q_v, v = 1..5", out.q_edge}, {"  generic Q_v, v = 6..n", out.q_interior}});
    return out;
  }

  check_paper_domain(config.n, config.k);
  BoundBreakdown& b = out.bound;
  for (int i = 1; i <= 5; ++i) {
    const double q = q_closed_paper(i, config.n, config.k);
    out.q_edge += q;
    b.provenance.push_back({"printed Q_" + std::to_string(i), q});
  }
  out.q_interior = static_cast<double>(config.n - 5) * q_interior_bound(config.n, config.k);
  b.provenance.push_back({"(n - 5) x printed interior bound 339[k(k+1)(k+2)/D]^{3/2}",
                          out.q_interior});
  b.q_total = out.q_edge + out.q_interior;
  b.term_scale_gap = paper_scale_gap(config.n, config.k);
  b.provenance.push_back({"printed scale gap", b.term_scale_gap});
  // S_d = 0 and l'' = -alpha identically.
  b.term_remainder = 0.0;
  b.term_second_deriv = 0.0;
  b.provenance.push_back({"remainder (S_d = 0)", 0.0});
  b.provenance.push_back({"second derivative (l'' = -alpha)", 0.0});
  b.total = b.sum_of_terms();
  return out;
}

CorollaryBound corollary_bound(std::size_t n, std::uint32_t k, BoundMode mode) {
  return corollary_bound(BlockSumConfig{n, k, 0.0, 1.0}, mode);
}

}  // namespace mlebound
