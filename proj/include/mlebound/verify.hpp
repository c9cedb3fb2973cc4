#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlebound/harness.hpp"

namespace mlebound {

enum class CheckStatus { pass, fail, note };

struct VerifyItem {
  CheckStatus status = CheckStatus::pass;
  std::string check;
  std::string detail;
};

/// One generic-vs-printed comparison of a Q_v component.
struct QComparison {
  std::size_t n = 0;
  std::uint32_t k = 0;
  int index = 0;
  std::string component;  // "moment" (fourth + second moment terms), "jensen" or "total"
  double generic = 0.0;
  double printed = 0.0;
  double signed_rel_diff = 0.0;  // (printed - generic) / generic
  bool matches = false;          // |signed_rel_diff| <= 1e-10
};

struct VerifyReport {
  std::vector<VerifyItem> items;
  std::vector<QComparison> comparisons;

  // True when a normative invariant failed. Printed-formula discrepancies are notes.
  bool has_violations() const;
  std::string to_text() const;
};

inline constexpr double kClosedFormMatchTolerance = 1e-10;

/// Generic Q_v vs the printed closed forms for v = 1..5 (requires n >= 10).
std::vector<QComparison> compare_closed_forms(std::size_t n, std::uint32_t k);

/// Full oracle-equivalence and invariant suite. Empty lists select
/// n in {10, 20, 100} and k in {1, 2, 3}.
VerifyReport run_verify(const ExperimentSpec& spec);

}  // namespace mlebound
