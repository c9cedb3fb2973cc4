#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mlebound/harness.hpp"

namespace mlebound {

/// Fixed CSV column order. New columns are only ever appended.
inline constexpr std::string_view kCsvColumns =
    "n,k,sigma2,mode,q_total,term_scale_gap,term_remainder,term_second_deriv,total,"
    "exact_w1,empirical_w1,reps,seed,wall_ms,q_edge,q_interior,empirical_ok,bound_ok,error";

inline constexpr std::string_view kRateCsvColumns =
    "n,k,mode,total,term_scale_gap,fitted_log_total,residual,slope,intercept,r_squared,"
    "scale_gap_slope";

std::string mode_name(BoundMode mode);
// Accepts "normative", "paper" and "paper-closed-form". Throws SpecError.
BoundMode parse_mode(std::string_view text);

// Doubles are written with 17 significant digits; absent values are empty/null.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string rows_to_json(const std::vector<ResultRow>& rows);

// Throw std::runtime_error on malformed input.
std::vector<ResultRow> rows_from_csv(std::string_view text);
std::vector<ResultRow> rows_from_json(std::string_view text);

std::string rate_to_csv(const RateFit& fit);
std::string rate_to_json(const RateFit& fit);

}  // namespace mlebound
