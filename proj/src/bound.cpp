#include "mlebound/bound.hpp"

#include <cmath>
#include <stdexcept>

namespace mlebound {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

// Terms 5 and 6 of the general bound; shared by both variants.
void add_taylor_terms(BoundBreakdown& b, const TheoremInputs& in, double a) {
  const double root_n_i2 = std::sqrt(static_cast<double>(in.n) * in.i2);
  b.term_remainder = in.s_d * root_n_i2 / (2.0 * a) * in.mse_mle;
  b.term_second_deriv = root_n_i2 / a * std::sqrt(in.mse_mle) * std::sqrt(in.sq_dev_second);
  b.provenance.push_back({"remainder: S_d sqrt(n i2)/(2 alpha) E(mle-theta0)^2", b.term_remainder});
  b.provenance.push_back(
      {"second derivative: sqrt(n i2)/alpha sqrt(E(mle-theta0)^2 E(l''+alpha)^2)",
       b.term_second_deriv});
}

}  // namespace

void TheoremInputs::validate() const {
  require(n >= 1, "theorem inputs need n >= 1");
  require(finite_pos(var_score), "Var l' must be positive and finite");
  require(finite_pos(var_mle), "Var mle must be positive and finite");
  require(finite_pos(i2), "i2 must be positive and finite");
  require(finite_nonneg(s_d), "S_d must be non-negative and finite");
  require(finite_nonneg(mse_mle), "E(mle - theta0)^2 must be non-negative and finite");
  require(finite_nonneg(sq_dev_second), "E(l'' + alpha)^2 must be non-negative and finite");
}

double alpha(double var_score, double var_mle) {
  require(finite_pos(var_score) && finite_pos(var_mle),
          "alpha needs positive, finite variances");
  return std::sqrt(var_score / var_mle);
}

BoundBreakdown assemble_bound(double q_total, const TheoremInputs& inputs) {
  inputs.validate();
  require(finite_nonneg(q_total), "q_total must be non-negative and finite");
  const double a = alpha(inputs.var_score, inputs.var_mle);
  BoundBreakdown b;
  b.q_total = q_total;
  b.provenance.push_back({"Stein terms: sum_v Q_v (Holder, Cauchy-Schwarz, Jensen)", q_total});
  b.term_scale_gap =
      std::abs(std::sqrt(static_cast<double>(inputs.n) * inputs.i2 * inputs.var_score) / a - 1.0);
  b.provenance.push_back({"scale gap: |sqrt(n i2 Var l')/alpha - 1|", b.term_scale_gap});
  add_taylor_terms(b, inputs, a);
  b.total = b.sum_of_terms();
  return b;
}

BoundBreakdown general_bound(const NeighborhoodSystem& system, const ScoreMomentProfile& moments,
                             const TheoremInputs& inputs) {
  inputs.validate();
  require(system.size() == inputs.n, "neighborhood system size differs from inputs.n");
  return assemble_bound(q_sum(system, moments), inputs);
}

BoundBreakdown iid_bound(double abs3, double var1, const TheoremInputs& inputs) {
  inputs.validate();
  require(finite_pos(var1), "per-observation score variance must be positive");
  require(std::isfinite(abs3), "E|score|^3 must be finite");
  const double lyapunov_floor = std::pow(var1, 1.5);
  if (abs3 < lyapunov_floor * (1.0 - 1e-12)) {
    throw std::invalid_argument("invalid moments: E|score|^3 < Var(score)^{3/2}");
  }
  const double a = alpha(inputs.var_score, inputs.var_mle);
  const double n = static_cast<double>(inputs.n);
  BoundBreakdown b;
  b.q_total = 5.0 * abs3 / (std::sqrt(n) * lyapunov_floor);
  b.provenance.push_back({"Stein term: 5 E|score|^3 / (sqrt(n) Var(score)^{3/2})", b.q_total});
  b.term_scale_gap = std::abs(n * std::sqrt(inputs.i2 * var1) / a - 1.0);
  b.provenance.push_back({"scale gap: |n sqrt(i2 Var(score))/alpha - 1|", b.term_scale_gap});
  add_taylor_terms(b, inputs, a);
  b.total = b.sum_of_terms();
  return b;
}

}  // namespace mlebound
