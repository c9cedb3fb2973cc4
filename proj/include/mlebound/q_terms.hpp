#pragma once

#include <cstddef>

#include "mlebound/moments.hpp"
#include "mlebound/neighborhoods.hpp"

namespace mlebound {

/// Per-index split of the moment-relaxed Stein terms, already scaled by n^{-3/2}.
struct QComponents {
  double fourth_moment = 0.0;  // 2 sum_{j in A} sum_{l in B} [m4_v m4_j m4_l]^{1/4}
  double second_moment = 0.0;  // 2 sum_{j in A} sum_{l in B} [m2_v m2_j m2_l]^{1/2}
  double jensen = 0.0;         // |A| sum_{j in A} [m2_v m4_j]^{1/2}

  double total() const { return fourth_moment + second_moment + jensen; }
};

/// Q_v for index v (1-based). Moment entries below 1e-300 are treated as zero.
/// Throws std::out_of_range for v outside 1..n and std::invalid_argument when
/// the profile and the system disagree on n.
double q_term(std::size_t v, const NeighborhoodSystem& system, const ScoreMomentProfile& moments);

QComponents q_components(std::size_t v, const NeighborhoodSystem& system,
                         const ScoreMomentProfile& moments);

/// Sum of Q_v over v = 1..n: the first three terms of the general bound.
/// OpenMP-parallel; the result does not depend on the worker count.
double q_sum(const NeighborhoodSystem& system, const ScoreMomentProfile& moments);

/// Sum of Q_v over v in [first, last]; an empty range sums to zero.
double q_sum_range(const NeighborhoodSystem& system, const ScoreMomentProfile& moments,
                   std::size_t first, std::size_t last);

/// Serial reference for q_sum: evaluates every Q_v directly, left to right.
double q_sum_serial(const NeighborhoodSystem& system, const ScoreMomentProfile& moments);

}  // namespace mlebound
