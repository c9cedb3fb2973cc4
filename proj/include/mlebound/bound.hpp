#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mlebound/moments.hpp"
#include "mlebound/neighborhoods.hpp"
#include "mlebound/q_terms.hpp"

namespace mlebound {

/// Model quantities consumed by the general MLE bound.
///
/// `i2` is the declared limit of 1/(n Var(mle)); it is never estimated here.
/// `mse_mle` should dominate the squared bias when one is known (not checked).
struct TheoremInputs {
  std::size_t n = 0;
  double var_score = 0.0;      // Var l'(theta_0; X) > 0
  double var_mle = 0.0;        // Var mle > 0
  double i2 = 0.0;             // > 0
  double s_d = 0.0;            // sup |l'''|, >= 0
  double mse_mle = 0.0;        // E(mle - theta_0)^2 >= 0
  double sq_dev_second = 0.0;  // E(l'' + alpha)^2 >= 0

  // Throws std::invalid_argument when a constraint fails.
  void validate() const;
};

struct LabeledTerm {
  std::string label;
  double value = 0.0;
};

/// Per-term values of a computed bound. `q_total` carries the three
/// moment-relaxed terms jointly; `q_split` is filled only when a per-component
/// evaluation was requested.
struct BoundBreakdown {
  double q_total = 0.0;
  std::optional<QComponents> q_split;
  double term_scale_gap = 0.0;
  double term_remainder = 0.0;
  double term_second_deriv = 0.0;
  double total = 0.0;
  std::vector<LabeledTerm> provenance;

  double sum_of_terms() const {
    return q_total + term_scale_gap + term_remainder + term_second_deriv;
  }
};

/// sqrt(var_score / var_mle). Throws on non-positive or non-finite input.
double alpha(double var_score, double var_mle);

/// Full six-term bound on d_W(sqrt(n i2)(mle - theta_0), N(0,1)) for m-dependent data.
BoundBreakdown general_bound(const NeighborhoodSystem& system, const ScoreMomentProfile& moments,
                             const TheoremInputs& inputs);

/// Same as general_bound with the Stein part supplied as an already-computed q_total.
BoundBreakdown assemble_bound(double q_total, const TheoremInputs& inputs);

/// Specialization to i.i.d. observations. `abs3` and `var1` are E|d/dtheta log f(X_1)|^3
/// and Var(d/dtheta log f(X_1)) at theta_0; n comes from `inputs`.
/// Throws std::invalid_argument when var1 <= 0 or abs3 < var1^{3/2}.
BoundBreakdown iid_bound(double abs3, double var1, const TheoremInputs& inputs);

}  // namespace mlebound
