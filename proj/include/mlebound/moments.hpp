#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mlebound {

/// A maximal stretch of consecutive indices sharing the same moments.
struct MomentRun {
  std::size_t first = 1;  // 1-based index of the first member
  std::size_t count = 0;
  double second = 0.0;    // E(xi^2)
  double fourth = 0.0;    // E(xi^4)
  std::optional<double> abs_third;  // E|xi|^3
};

/// Per-index second and fourth moments (optionally third absolute moments)
/// of the standardized score contributions xi_i.
///
/// Stored run-length encoded: identically distributed stretches, as in the
/// block-sum model, cost one entry regardless of n. Construction validates
/// finiteness, non-negativity and the Lyapunov ordering
/// second^2 <= fourth, second^{3/2} <= abs_third <= fourth^{3/4}
/// (with a relative slack of 1e-12 for rounding).
class ScoreMomentProfile {
 public:
  static ScoreMomentProfile from_values(std::span<const double> second,
                                        std::span<const double> fourth,
                                        std::span<const double> abs_third = {});
  static ScoreMomentProfile uniform(std::size_t n, double second, double fourth,
                                    std::optional<double> abs_third = std::nullopt);
  // Concatenates runs; counts must be positive. The `first` fields are recomputed.
  static ScoreMomentProfile from_runs(std::vector<MomentRun> runs);

  std::size_t size() const { return n_; }
  std::span<const MomentRun> runs() const { return runs_; }
  bool has_abs_third() const { return has_abs_third_; }

  // 1-based accessors; O(log runs).
  double second(std::size_t i) const;
  double fourth(std::size_t i) const;
  std::optional<double> abs_third(std::size_t i) const;

  // Index of the run containing 1-based index i.
  std::size_t run_index(std::size_t i) const;

 private:
  ScoreMomentProfile() = default;
  void validate_and_merge();

  std::size_t n_ = 0;
  bool has_abs_third_ = false;
  std::vector<MomentRun> runs_;
};

}  // namespace mlebound
