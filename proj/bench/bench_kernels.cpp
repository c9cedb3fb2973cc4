// Serial reference vs OpenMP kernels. Prints one line per kernel with the
// best-of-R wall time of each and whether the results agree.
//
//   bench_kernels [--workers N] [--repeat R]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include <CLI11.hpp>

#include "mlebound/blocksum.hpp"
#include "mlebound/lemma.hpp"
#include "mlebound/parallel.hpp"
#include "mlebound/q_terms.hpp"
#include "mlebound/rng.hpp"
#include "mlebound/wasserstein.hpp"

namespace {

using namespace mlebound;

double best_ms(int repeat, const std::function<void()>& f) {
  double best = INFINITY;
  for (int r = 0; r < repeat; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void line(const char* name, double serial_ms, double parallel_ms, bool agree) {
  std::printf("%-34s serial %10.2f ms   parallel %10.2f ms   speedup %5.2fx   %s\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms, agree ? "agree" : "MISMATCH");
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernel timings"};
  int workers = 0;
  int repeat = 3;
  app.add_option("--workers", workers, "OpenMP workers (0: runtime default)");
  app.add_option("--repeat", repeat, "Timed repetitions per kernel")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  WorkerScope scope(workers);
  std::printf("workers: %d\n", worker_count());

  {
    const BlockSumConfig cfg{1000, 1, 0.0, 1.0};
    ReplicateMatrix s, p;
    const double ts = best_ms(repeat, [&] { s = simulate_paths_serial(cfg, 4000, 1); });
    const double tp = best_ms(repeat, [&] { p = simulate_paths(cfg, 4000, 1); });
    line("simulate_paths n=1000 reps=4000", ts, tp, s == p);
  }
  {
    const BlockSumConfig cfg{10000, 2, 0.0, 1.0};
    std::vector<ReplicateSummary> s, p;
    const double ts = best_ms(repeat, [&] { s = simulate_summaries_serial(cfg, 2000, 3); });
    const double tp = best_ms(repeat, [&] { p = simulate_summaries(cfg, 2000, 3); });
    const bool agree = std::equal(s.begin(), s.end(), p.begin(), p.end(), [](auto& a, auto& b) {
      return a.mle_error == b.mle_error && a.score == b.score;
    });
    line("simulate_summaries n=1e4 reps=2000", ts, tp, agree);
  }
  {
    // Non-uniform moments defeat the per-run cache, so this times the raw window sums.
    const std::size_t n = 200000;
    std::vector<double> m2(n), m4(n);
    for (std::size_t i = 0; i < n; ++i) {
      m2[i] = 1.0 + 0.5 * std::sin(0.001 * static_cast<double>(i));
      m4[i] = 3.0 * m2[i] * m2[i];
    }
    const auto moments = ScoreMomentProfile::from_values(m2, m4);
    const auto sys = build_neighborhoods(n, 2);
    double s = 0.0, p = 0.0;
    const double ts = best_ms(repeat, [&] { s = q_sum_serial(sys, moments); });
    const double tp = best_ms(repeat, [&] { p = q_sum(sys, moments); });
    line("q_sum n=2e5 m=2 varying moments", ts, tp, close(s, p));
  }
  {
    const BlockSumConfig cfg{200, 1, 0.0, 1.0};
    const auto paths = standardized_score_paths(cfg, simulate_paths(cfg, 5000, 5));
    const auto sys = build_neighborhoods(cfg.n, 1);
    LemmaTermEstimate s, p;
    const double ts = best_ms(repeat, [&] { s = lemma_terms_mc_serial(paths, sys); });
    const double tp = best_ms(repeat, [&] { p = lemma_terms_mc(paths, sys); });
    line("lemma_terms_mc n=200 reps=5000", ts, tp, close(s.lemma_total, p.lemma_total));
  }
  {
    std::vector<double> v(2000000);
    ReplicateStream rs(9, 0);
    for (auto& x : v) x = rs.normal();
    const SampleSet samples = SampleSet(std::move(v)).sorted();
    double s = 0.0, p = 0.0;
    const double ts = best_ms(repeat, [&] { s = empirical_w1_std_normal_serial(samples); });
    const double tp = best_ms(repeat, [&] { p = empirical_w1_std_normal(samples); });
    line("empirical_w1 N=2e6 (presorted)", ts, tp, close(s, p));
  }
  return 0;
}
