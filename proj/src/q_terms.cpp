#include "mlebound/q_terms.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mlebound/parallel.hpp"

namespace mlebound {

namespace {

constexpr double kUnderflow = 1e-300;

double flushed(double x) { return x < kUnderflow ? 0.0 : x; }

// Fractional powers of one run's moments.
struct RunPowers {
  std::size_t first = 1;
  std::size_t last = 0;
  double quarter_fourth = 0.0;  // m4^{1/4}
  double half_second = 0.0;     // m2^{1/2}
  double half_fourth = 0.0;     // m4^{1/2}
};

struct WindowSums {
  double quarter_fourth = 0.0;
  double half_second = 0.0;
  double half_fourth = 0.0;
};

// The triple sums factor: sum_{j,l} [m_v m_j m_l]^p = m_v^p (sum_A m_j^p)(sum_B m_l^p).
class QEvaluator {
 public:
  QEvaluator(const NeighborhoodSystem& system, const ScoreMomentProfile& moments)
      : system_(system), scale_(std::pow(static_cast<double>(system.size()), -1.5)) {
    if (moments.size() != system.size()) {
      throw std::invalid_argument("moment profile and neighborhood system sizes differ");
    }
    for (const auto& r : moments.runs()) {
      const double m2 = flushed(r.second);
      const double m4 = flushed(r.fourth);
      runs_.push_back({r.first, r.first + r.count - 1, std::pow(m4, 0.25), std::sqrt(m2),
                       std::sqrt(m4)});
    }
    // Q_v is constant for indices whose (unclipped) B window sits inside one run.
    const std::size_t width = 2 * system.outer_radius() + 1;
    interior_.resize(runs_.size());
    for (std::size_t r = 0; r < runs_.size(); ++r) {
      const auto& run = runs_[r];
      if (run.last - run.first + 1 < width) continue;
      const std::size_t v = run.first + system.outer_radius();
      if (unclipped_inside(v, r)) interior_[r] = term(v, r);
    }
  }

  std::size_t locate(std::size_t v) const {
    auto it = std::upper_bound(runs_.begin(), runs_.end(), v,
                               [](std::size_t x, const RunPowers& r) { return x < r.first; });
    return static_cast<std::size_t>(it - runs_.begin()) - 1;
  }

  QComponents components(std::size_t v, std::size_t run) const {
    const Interval a = system_.A(v);
    const Interval b = system_.B(v);
    const WindowSums sa = window(a, run);
    const WindowSums sb = window(b, run);
    const RunPowers& self = runs_[run];
    QComponents c;
    c.fourth_moment = scale_ * 2.0 * self.quarter_fourth * sa.quarter_fourth * sb.quarter_fourth;
    c.second_moment = scale_ * 2.0 * self.half_second * sa.half_second * sb.half_second;
    c.jensen = scale_ * static_cast<double>(a.size()) * self.half_second * sa.half_fourth;
    return c;
  }

  double term(std::size_t v, std::size_t run) const { return components(v, run).total(); }

  // Sum over [first, last] using the cached interior values.
  double sum_chunk(std::size_t first, std::size_t last) const {
    double total = 0.0;
    std::size_t run = locate(first);
    for (std::size_t v = first; v <= last; ++v) {
      while (v > runs_[run].last) ++run;
      if (interior_[run] && unclipped_inside(v, run)) {
        total += *interior_[run];
      } else {
        total += term(v, run);
      }
    }
    return total;
  }

 private:
  bool unclipped_inside(std::size_t v, std::size_t run) const {
    const std::size_t radius = system_.outer_radius();
    if (v <= radius || v + radius > system_.size()) return false;
    return v - radius >= runs_[run].first && v + radius <= runs_[run].last;
  }

  // Runs overlapping the window are found by walking out from the run holding v.
  WindowSums window(const Interval& w, std::size_t run) const {
    std::size_t r = run;
    while (r > 0 && runs_[r].first > w.first) --r;
    WindowSums s;
    for (; r < runs_.size() && runs_[r].first <= w.last; ++r) {
      const std::size_t lo = std::max(w.first, runs_[r].first);
      const std::size_t hi = std::min(w.last, runs_[r].last);
      if (hi < lo) continue;
      const double count = static_cast<double>(hi - lo + 1);
      s.quarter_fourth += count * runs_[r].quarter_fourth;
      s.half_second += count * runs_[r].half_second;
      s.half_fourth += count * runs_[r].half_fourth;
    }
    return s;
  }

  const NeighborhoodSystem& system_;
  double scale_;
  std::vector<RunPowers> runs_;
  std::vector<std::optional<double>> interior_;
};

void check_index(std::size_t v, const NeighborhoodSystem& system) {
  if (v < 1 || v > system.size()) throw std::out_of_range("q_term index out of range");
}

}  // namespace

QComponents q_components(std::size_t v, const NeighborhoodSystem& system,
                         const ScoreMomentProfile& moments) {
  check_index(v, system);
  QEvaluator eval(system, moments);
  return eval.components(v, eval.locate(v));
}

double q_term(std::size_t v, const NeighborhoodSystem& system,
              const ScoreMomentProfile& moments) {
  return q_components(v, system, moments).total();
}

double q_sum_range(const NeighborhoodSystem& system, const ScoreMomentProfile& moments,
                   std::size_t first, std::size_t last) {
  QEvaluator eval(system, moments);
  first = std::max<std::size_t>(first, 1);
  last = std::min(last, system.size());
  if (last < first) return 0.0;
  const std::size_t items = last - first + 1;
  const std::size_t chunks = chunk_count(items, kIndexChunk);
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = first + c * kIndexChunk;
    const std::size_t hi = std::min(last, lo + kIndexChunk - 1);
    partial[c] = eval.sum_chunk(lo, hi);
  }
  return ordered_sum(partial);
}

double q_sum(const NeighborhoodSystem& system, const ScoreMomentProfile& moments) {
  return q_sum_range(system, moments, 1, system.size());
}

double q_sum_serial(const NeighborhoodSystem& system, const ScoreMomentProfile& moments) {
  QEvaluator eval(system, moments);
  double total = 0.0;
  for (std::size_t v = 1; v <= system.size(); ++v) total += eval.term(v, eval.locate(v));
  return total;
}

}  // namespace mlebound
