#include "mlebound/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mlebound {

namespace {

constexpr double kLyapunovSlack = 1e-12;

bool le_with_slack(double lhs, double rhs) {
  return lhs <= rhs * (1.0 + kLyapunovSlack) + 1e-300;
}

void check_run(const MomentRun& r) {
  const auto where = " (indices " + std::to_string(r.first) + ".." +
                     std::to_string(r.first + r.count - 1) + ")";
  if (!std::isfinite(r.second) || !std::isfinite(r.fourth) || r.second < 0.0 ||
      r.fourth < 0.0) {
    throw std::invalid_argument("moments must be finite and non-negative" + where);
  }
  if (!le_with_slack(r.second * r.second, r.fourth)) {
    throw std::invalid_argument("Lyapunov violation: E(xi^2)^2 > E(xi^4)" + where);
  }
  if (r.abs_third) {
    const double a3 = *r.abs_third;
    if (!std::isfinite(a3) || a3 < 0.0) {
      throw std::invalid_argument("E|xi|^3 must be finite and non-negative" + where);
    }
    if (!le_with_slack(std::pow(r.second, 1.5), a3) ||
        !le_with_slack(a3, std::pow(r.fourth, 0.75))) {
      throw std::invalid_argument("Lyapunov violation on E|xi|^3" + where);
    }
  }
}

bool same_moments(const MomentRun& a, const MomentRun& b) {
  return a.second == b.second && a.fourth == b.fourth && a.abs_third == b.abs_third;
}

}  // namespace

ScoreMomentProfile ScoreMomentProfile::from_values(std::span<const double> second,
                                                   std::span<const double> fourth,
                                                   std::span<const double> abs_third) {
  if (second.size() != fourth.size()) {
    throw std::invalid_argument("second and fourth moment lists differ in length");
  }
  if (!abs_third.empty() && abs_third.size() != second.size()) {
    throw std::invalid_argument("abs_third moment list has the wrong length");
  }
  std::vector<MomentRun> runs;
  runs.reserve(second.size());
  for (std::size_t i = 0; i < second.size(); ++i) {
    MomentRun r{i + 1, 1, second[i], fourth[i], std::nullopt};
    if (!abs_third.empty()) r.abs_third = abs_third[i];
    runs.push_back(r);
  }
  return from_runs(std::move(runs));
}

ScoreMomentProfile ScoreMomentProfile::uniform(std::size_t n, double second, double fourth,
                                               std::optional<double> abs_third) {
  return from_runs({MomentRun{1, n, second, fourth, abs_third}});
}

ScoreMomentProfile ScoreMomentProfile::from_runs(std::vector<MomentRun> runs) {
  ScoreMomentProfile p;
  p.runs_ = std::move(runs);
  p.validate_and_merge();
  return p;
}

void ScoreMomentProfile::validate_and_merge() {
  if (runs_.empty()) throw std::invalid_argument("moment profile needs at least one index");
  has_abs_third_ = runs_.front().abs_third.has_value();
  std::vector<MomentRun> merged;
  std::size_t next = 1;
  for (auto r : runs_) {
    if (r.count == 0) throw std::invalid_argument("moment run with zero length");
    if (r.abs_third.has_value() != has_abs_third_) {
      throw std::invalid_argument("abs_third must be given for all indices or none");
    }
    r.first = next;
    check_run(r);
    next += r.count;
    if (!merged.empty() && same_moments(merged.back(), r)) {
      merged.back().count += r.count;
    } else {
      merged.push_back(r);
    }
  }
  n_ = next - 1;
  runs_ = std::move(merged);
}

std::size_t ScoreMomentProfile::run_index(std::size_t i) const {
  if (i < 1 || i > n_) {
    throw std::out_of_range("moment index " + std::to_string(i) + " outside 1.." +
                            std::to_string(n_));
  }
  auto it = std::upper_bound(runs_.begin(), runs_.end(), i,
                             [](std::size_t v, const MomentRun& r) { return v < r.first; });
  return static_cast<std::size_t>(it - runs_.begin()) - 1;
}

double ScoreMomentProfile::second(std::size_t i) const { return runs_[run_index(i)].second; }

double ScoreMomentProfile::fourth(std::size_t i) const { return runs_[run_index(i)].fourth; }

std::optional<double> ScoreMomentProfile::abs_third(std::size_t i) const {
  return runs_[run_index(i)].abs_third;
}

}  // namespace mlebound
