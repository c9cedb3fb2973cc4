// Command-line runner: bound tables, simulations, rate fits and the verify suite.
//
//   mlebound bound --k 1 --n 10,100,1000 [--mode normative|paper]
//   mlebound simulate --k 1 --n 100 --reps 20000 --seed 7
//   mlebound rate --k 1 --n 1e3,1e4,1e5,1e6,1e7
//   mlebound verify [--n 10,20] [--k 1,2]
//
// Exit status: 0 success, 1 invalid spec, 2 invariant violation in verify.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlebound/harness.hpp"
#include "mlebound/parallel.hpp"
#include "mlebound/report.hpp"
#include "mlebound/verify.hpp"

namespace {

using namespace mlebound;

constexpr int kExitInvalid = 1;
constexpr int kExitViolation = 2;

// Accepts plain integers and exact scientific forms such as 1e7.
std::uint64_t parse_count(const std::string& text, const char* what) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno != 0 || !(v >= 0.0) ||
      v > 9.0e18 || v != std::floor(v)) {
    throw SpecError(std::string("invalid ") + what + " value '" + text + "'");
  }
  if (text.find_first_of("eE.") == std::string::npos) return std::stoull(text);
  return static_cast<std::uint64_t>(v);
}

std::string verify_to_json(const VerifyReport& report) {
  using nlohmann::json;
  json items = json::array();
  for (const auto& i : report.items) {
    const char* status = i.status == CheckStatus::pass   ? "pass"
                         : i.status == CheckStatus::fail ? "fail"
                                                         : "note";
    items.push_back({{"status", status}, {"check", i.check}, {"detail", i.detail}});
  }
  json comparisons = json::array();
  for (const auto& c : report.comparisons) {
    comparisons.push_back({{"n", c.n},
                           {"k", c.k},
                           {"index", c.index},
                           {"component", c.component},
                           {"generic", c.generic},
                           {"printed", c.printed},
                           {"signed_rel_diff", c.signed_rel_diff},
                           {"matches", c.matches}});
  }
  json j{{"violations", report.has_violations()}, {"items", items}, {"comparisons", comparisons}};
  return j.dump(2) + "\n";
}

void emit(const ExperimentSpec& spec, const std::string& text) {
  if (spec.out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(spec.out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw SpecError("cannot open output file " + spec.out_path);
  out << text;
  if (!out) throw SpecError("failed writing " + spec.out_path);
}

struct RawOptions {
  std::vector<std::string> n;
  std::vector<std::string> k;
  std::string mode = "normative";
  std::string format = "csv";
  int workers = 0;
};

ExperimentSpec to_spec(Command command, const RawOptions& raw, ExperimentSpec spec) {
  spec.command = command;
  for (const auto& s : raw.n) spec.n_values.push_back(parse_count(s, "--n"));
  for (const auto& s : raw.k) {
    const auto k = parse_count(s, "--k");
    if (k > 1000000) throw SpecError("--k value too large");
    spec.k_values.push_back(static_cast<std::uint32_t>(k));
  }
  spec.mode = parse_mode(raw.mode);
  if (raw.format == "csv") {
    spec.format = OutputFormat::csv;
  } else if (raw.format == "json") {
    spec.format = OutputFormat::json;
  } else {
    throw SpecError("unknown format '" + raw.format + "' (expected csv or json)");
  }
  if (command != Command::verify && spec.k_values.size() > 1) {
    throw SpecError("--k takes a single value for this command");
  }
  spec.validate();
  return spec;
}

int run(Command command, const ExperimentSpec& spec) {
  const bool json = spec.format == OutputFormat::json;
  switch (command) {
    case Command::bound: {
      const auto rows = run_bound_table(spec);
      emit(spec, json ? rows_to_json(rows) : rows_to_csv(rows));
      return 0;
    }
    case Command::simulate: {
      const auto rows = run_simulation(spec);
      emit(spec, json ? rows_to_json(rows) : rows_to_csv(rows));
      return 0;
    }
    case Command::rate: {
      const auto fit = run_rate_fit(spec);
      emit(spec, json ? rate_to_json(fit) : rate_to_csv(fit));
      return 0;
    }
    case Command::verify: {
      const auto report = run_verify(spec);
      emit(spec, json ? verify_to_json(report) : report.to_text());
      return report.has_violations() ? kExitViolation : 0;
    }
  }
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein bounds for MLEs under m-dependence: bound tables, simulations, rate fits"};
  app.require_subcommand(1);

  RawOptions raw;
  ExperimentSpec base;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", raw.format, "csv or json")->capture_default_str();
    sub->add_option("--out", base.out_path, "Output file (default: standard output)");
    sub->add_option("--workers", raw.workers, "OpenMP worker count (0: runtime default)");
  };
  const auto add_n = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--n", raw.n, "Sample sizes, comma separated or repeated")
                    ->delimiter(',');
    if (required) opt->required();
  };
  const auto add_model = [&](CLI::App* sub) {
    sub->add_option("--k", raw.k, "Block overlap parameter")->required()->delimiter(',');
    sub->add_option("--sigma2", base.sigma2, "Known variance")->capture_default_str();
    sub->add_option("--mode", raw.mode, "normative or paper")->capture_default_str();
  };

  auto* bound = app.add_subcommand("bound", "Bound breakdown per n");
  add_model(bound);
  add_n(bound, true);
  add_common(bound);
  bound->add_flag("--timing", base.timing, "Fill wall_ms (output is then run-dependent)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check against the exact law");
  add_model(simulate);
  add_n(simulate, true);
  add_common(simulate);
  simulate->add_option("--reps", base.reps, "Replicates per n")->capture_default_str();
  simulate->add_option("--seed", base.seed, "64-bit seed")->capture_default_str();
  simulate->add_option("--theta0", base.theta0, "True mean")->capture_default_str();
  simulate->add_option("--budget", base.draw_budget, "Cap on reps * (nk + 1) per n")
      ->capture_default_str();
  simulate->add_flag("--timing", base.timing, "Fill wall_ms (output is then run-dependent)");

  auto* rate = app.add_subcommand("rate", "Log-log slope of the bound in n");
  add_model(rate);
  add_n(rate, true);
  add_common(rate);

  auto* verify = app.add_subcommand("verify", "Oracle-equivalence and invariant suite");
  add_n(verify, false);
  verify->add_option("--k", raw.k, "Block overlap parameters")->delimiter(',');
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalid;
  }

  Command command = Command::bound;
  if (simulate->parsed()) command = Command::simulate;
  if (rate->parsed()) command = Command::rate;
  if (verify->parsed()) command = Command::verify;

  try {
    const ExperimentSpec spec = to_spec(command, raw, base);
    WorkerScope workers(raw.workers);
    return run(command, spec);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
