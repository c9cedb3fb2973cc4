#include "mlebound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mlebound/lemma.hpp"
#include "mlebound/neighborhoods.hpp"
#include "mlebound/q_terms.hpp"

namespace mlebound {

namespace {

constexpr std::uint64_t kVerifySeed = 20170101;
constexpr std::size_t kVerifyReps = 4000;

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double rel_diff(double reference, double value) {
  if (reference == 0.0) return value == 0.0 ? 0.0 : INFINITY;
  return (value - reference) / reference;
}

class Report {
 public:
  explicit Report(VerifyReport& r) : r_(r) {}
  void check(bool ok, std::string name, std::string detail) {
    r_.items.push_back({ok ? CheckStatus::pass : CheckStatus::fail, std::move(name),
                        std::move(detail)});
  }
  void note(std::string name, std::string detail) {
    r_.items.push_back({CheckStatus::note, std::move(name), std::move(detail)});
  }

 private:
  VerifyReport& r_;
};

void check_neighborhoods(Report& rep) {
  std::size_t systems = 0;
  std::string first_failure;
  for (std::size_t n = 1; n <= 200; ++n) {
    for (std::size_t m = 0; m <= 10; ++m) {
      ++systems;
      const auto sys = build_neighborhoods(n, m);
      for (std::size_t i = 1; i <= n && first_failure.empty(); ++i) {
        const Interval a = sys.A(i);
        const Interval b = sys.B(i);
        const Interval expect_a{i > 2 * m ? i - 2 * m : 1, std::min(n, i + 2 * m)};
        const Interval expect_b{i > 4 * m ? i - 4 * m : 1, std::min(n, i + 4 * m)};
        bool ok = a.contains(i) && b.contains(a) && b.first >= 1 && b.last <= n &&
                  a == expect_a && b == expect_b && a.size() <= 4 * m + 1 &&
                  b.size() <= 8 * m + 1;
        for (std::size_t j = 1; j <= n && ok; ++j) {
          const std::size_t gap = j > i ? j - i : i - j;
          if (!a.contains(j) && gap <= 2 * m) ok = false;
        }
        if (!ok) first_failure = fmt("n=%zu m=%zu i=%zu", n, m, i);
      }
    }
  }
  rep.check(first_failure.empty(), "neighborhood invariants",
            first_failure.empty() ? fmt("%zu systems (n <= 200, m <= 10) checked exhaustively", systems)
                                  : "violated at " + first_failure);
}

void check_closed_form_identities(Report& rep, std::size_t n, std::uint32_t k) {
  const BlockSumConfig cfg{n, k, 0.0, 1.0};
  const auto f = closed_forms(cfg);
  const double alpha_gap = rel_diff(f.var_score, f.alpha * f.alpha * f.var_mle);
  rep.check(std::abs(alpha_gap) <= 1e-12, fmt("alpha identity (n=%zu,k=%u)", n, k),
            fmt("alpha^2 Var(mle) = %.12g, Var l' = %.12g, rel diff %.2e",
                f.alpha * f.alpha * f.var_mle, f.var_score, alpha_gap));
  const double alpha_derived = alpha(f.var_score, f.var_mle);
  rep.check(std::abs(rel_diff(f.alpha, alpha_derived)) <= 1e-12,
            fmt("alpha from variances (n=%zu,k=%u)", n, k),
            fmt("sqrt(Var l'/Var mle) = %.15g vs closed form %.15g", alpha_derived, f.alpha));

  bool lyapunov = true;
  try {
    (void)moment_profile(cfg);
  } catch (const std::invalid_argument&) {
    lyapunov = false;
  }
  const double g1 = rel_diff(3.0 * f.xi1_m2 * f.xi1_m2, f.xi1_m4);
  const double gi = rel_diff(3.0 * f.xii_m2 * f.xii_m2, f.xii_m4);
  rep.check(lyapunov && std::abs(g1) <= 1e-12 && std::abs(gi) <= 1e-12,
            fmt("Lyapunov and Gaussian moment identity (n=%zu,k=%u)", n, k),
            fmt("E xi_1^4 / (3 (E xi_1^2)^2) - 1 = %.2e, E xi_i^4 / (3 (E xi_i^2)^2) - 1 = %.2e",
                g1, gi));
}

void check_bound_vs_truth(Report& rep, std::size_t n, std::uint32_t k) {
  const BlockSumConfig cfg{n, k, 0.0, 1.0};
  const auto cb = corollary_bound(cfg, BoundMode::normative);
  const double truth = exact_true_w1(cfg);
  rep.check(cb.bound.total > truth, fmt("bound dominates exact W1 (n=%zu,k=%u)", n, k),
            fmt("bound %.10g > exact %.10g", cb.bound.total, truth));
  if (n >= 10) {
    const double paper_gap = paper_scale_gap(n, k);
    const double d = rel_diff(cb.bound.term_scale_gap, paper_gap);
    rep.check(std::abs(d) <= 1e-10, fmt("scale gap, generic vs printed (n=%zu,k=%u)", n, k),
              fmt("generic %.12g, printed %.12g, rel diff %.2e", cb.bound.term_scale_gap,
                  paper_gap, d));
  }
}

void check_interior_domination(Report& rep, std::size_t n, std::uint32_t k) {
  if (n < 6) return;
  const BlockSumConfig cfg{n, k, 0.0, 1.0};
  const auto sys = build_neighborhoods(n, 1);
  const auto moments = moment_profile(cfg);
  const double cap = q_interior_bound(n, k);
  double worst = 0.0;
  for (std::size_t v = 6; v <= n; ++v) worst = std::max(worst, q_term(v, sys, moments));
  rep.check(worst <= cap, fmt("interior domination (n=%zu,k=%u)", n, k),
            fmt("max_{v>=6} Q_v = %.10g <= printed bound %.10g", worst, cap));
}

void report_comparisons(Report& rep, VerifyReport& out, std::size_t n, std::uint32_t k) {
  if (n < 10) {
    rep.note(fmt("closed-form comparison (n=%zu,k=%u)", n, k), "skipped: printed forms need n >= 10");
    return;
  }
  for (const auto& c : compare_closed_forms(n, k)) {
    out.comparisons.push_back(c);
    const auto name = fmt("Q_%d %s component (n=%zu,k=%u)", c.index, c.component.c_str(), n, k);
    const auto detail = fmt("generic %.10g vs printed %.10g, signed rel diff %+.3e", c.generic,
                            c.printed, c.signed_rel_diff);
    if (c.matches) {
      rep.check(true, name, detail);
    } else {
      rep.note(name, detail + " [documented discrepancy]");
    }
  }

  // The corollary's own aggregated brace against the sum of the printed Q_1..Q_5.
  PaperQParts sum;
  for (int i = 1; i <= 5; ++i) {
    const auto p = q_closed_paper_parts(i, n, k);
    sum.moment_part += p.moment_part;
    sum.jensen_part += p.jensen_part;
  }
  const auto display = corollary_edge_display(n, k);
  const double dm = rel_diff(sum.moment_part, display.moment_part);
  const double dj = rel_diff(sum.jensen_part, display.jensen_part);
  const auto detail = fmt("moment part %.10g vs %.10g (%+.3e); jensen part %.10g vs %.10g (%+.3e)",
                          sum.moment_part, display.moment_part, dm, sum.jensen_part,
                          display.jensen_part, dj);
  const auto name = fmt("corollary brace vs printed Q_1..Q_5 (n=%zu,k=%u)", n, k);
  if (std::abs(dm) <= kClosedFormMatchTolerance && std::abs(dj) <= kClosedFormMatchTolerance) {
    rep.check(true, name, detail);
  } else {
    rep.note(name, detail + " [documented discrepancy]");
  }
}

void check_lemma_dominance(Report& rep) {
  const BlockSumConfig cfg{10, 1, 0.0, 1.0};
  const auto paths = standardized_score_paths(cfg, simulate_paths(cfg, kVerifyReps, kVerifySeed));
  const auto sys = build_neighborhoods(cfg.n, 1);
  const auto est = lemma_terms_mc(paths, sys);
  const double closed = q_sum(sys, moment_profile(cfg));
  const double empirical = q_sum(sys, empirical_moment_profile(paths));
  const double slack = 3.0 * est.standard_error_total;
  rep.check(est.lemma_total <= closed + slack, "lemma terms <= relaxation (closed-form moments)",
            fmt("n=10,k=1, %zu reps: lemma %.6g (SE %.2g) <= q_sum %.6g", est.replicate_count,
                est.lemma_total, est.standard_error_total, closed));
  rep.check(est.lemma_total <= empirical + slack, "lemma terms <= relaxation (empirical moments)",
            fmt("n=10,k=1, %zu reps: lemma %.6g (SE %.2g) <= q_sum %.6g", est.replicate_count,
                est.lemma_total, est.standard_error_total, empirical));
}

}  // namespace

std::vector<QComparison> compare_closed_forms(std::size_t n, std::uint32_t k) {
  const BlockSumConfig cfg{n, k, 0.0, 1.0};
  const auto sys = build_neighborhoods(n, 1);
  const auto moments = moment_profile(cfg);
  std::vector<QComparison> out;
  for (int i = 1; i <= 5; ++i) {
    const QComponents g = q_components(static_cast<std::size_t>(i), sys, moments);
    const PaperQParts p = q_closed_paper_parts(i, n, k);
    const auto add = [&](const char* component, double generic, double printed) {
      const double d = rel_diff(generic, printed);
      out.push_back({n, k, i, component, generic, printed, d,
                     std::abs(d) <= kClosedFormMatchTolerance});
    };
    add("moment", g.fourth_moment + g.second_moment, p.moment_part);
    add("jensen", g.jensen, p.jensen_part);
    add("total", g.total(), p.total());
  }
  return out;
}

bool VerifyReport::has_violations() const {
  return std::any_of(items.begin(), items.end(),
                     [](const VerifyItem& i) { return i.status == CheckStatus::fail; });
}

std::string VerifyReport::to_text() const {
  std::ostringstream out;
  std::size_t pass = 0, fail = 0, note = 0;
  for (const auto& i : items) {
    const char* tag = "PASS";
    if (i.status == CheckStatus::fail) {
      tag = "FAIL";
      ++fail;
    } else if (i.status == CheckStatus::note) {
      tag = "NOTE";
      ++note;
    } else {
      ++pass;
    }
    out << tag << "  " << i.check << ": " << i.detail << '\n';
  }
  out << "summary: " << pass << " passed, " << fail << " failed, " << note
      << " documented discrepancies/notes\n";
  return out.str();
}

VerifyReport run_verify(const ExperimentSpec& spec) {
  std::vector<std::uint64_t> ns = spec.n_values;
  std::vector<std::uint32_t> ks = spec.k_values;
  if (ns.empty()) ns = {10, 20, 100};
  if (ks.empty()) ks = {1, 2, 3};
  ExperimentSpec checked = spec;
  checked.command = Command::verify;
  checked.n_values = ns;
  checked.k_values = ks;
  checked.validate();

  VerifyReport out;
  Report rep(out);
  check_neighborhoods(rep);

  const double c = interior_constant();
  rep.check(std::abs(c - 338.45691) <= 1e-5 && c < 339.0, "interior constant",
            fmt("90 + 90*3^(3/4) + 25*sqrt(3) = %.8f < 339", c));

  {
    const auto f = closed_forms({10, 1, 0.0, 1.0});
    rep.check(f.alpha == 8.0 && f.var_mle == 0.09375 && f.alpha * f.alpha * f.var_mle == 6.0,
              "alpha identity at (n,k,sigma2) = (10,1,1)",
              fmt("%.17g^2 * %.17g = %.17g", f.alpha, f.var_mle, f.alpha * f.alpha * f.var_mle));
  }

  for (auto k : ks) {
    for (auto n64 : ns) {
      const auto n = static_cast<std::size_t>(n64);
      check_closed_form_identities(rep, n, k);
      report_comparisons(rep, out, n, k);
      check_interior_domination(rep, n, k);
      check_bound_vs_truth(rep, n, k);
    }
  }
  check_lemma_dominance(rep);
  return out;
}

}  // namespace mlebound
