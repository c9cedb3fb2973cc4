#include "mlebound/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <json.hpp>

namespace mlebound {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string fmt_opt(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, bool>) {
    return *v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    return fmt_double(*v);
  } else {
    return std::to_string(*v);
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::runtime_error("bad number in CSV: " + s);
  return v;
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stoull(s);
}

std::optional<bool> parse_bool(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::runtime_error("bad boolean in CSV: " + s);
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> json_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string mode_name(BoundMode mode) {
  return mode == BoundMode::normative ? "normative" : "paper";
}

BoundMode parse_mode(std::string_view text) {
  if (text == "normative") return BoundMode::normative;
  if (text == "paper" || text == "paper-closed-form") return BoundMode::paper_closed_form;
  throw SpecError("unknown mode '" + std::string(text) + "' (expected normative or paper)");
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << kCsvColumns << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.k << ',' << fmt_double(r.sigma2) << ',' << mode_name(r.mode) << ','
        << fmt_opt(r.q_total) << ',' << fmt_opt(r.term_scale_gap) << ','
        << fmt_opt(r.term_remainder) << ',' << fmt_opt(r.term_second_deriv) << ','
        << fmt_opt(r.total) << ',' << fmt_opt(r.exact_w1) << ',' << fmt_opt(r.empirical_w1) << ','
        << fmt_opt(r.reps) << ',' << fmt_opt(r.seed) << ',' << fmt_opt(r.wall_ms) << ','
        << fmt_opt(r.q_edge) << ',' << fmt_opt(r.q_interior) << ',' << fmt_opt(r.empirical_ok)
        << ',' << fmt_opt(r.bound_ok) << ',' << csv_quote(r.error) << '\n';
  }
  return out.str();
}

std::vector<ResultRow> rows_from_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvColumns) {
    throw std::runtime_error("CSV header does not match the expected columns");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 19) throw std::runtime_error("CSV row has the wrong number of fields");
    ResultRow r;
    r.n = std::stoull(f[0]);
    r.k = static_cast<std::uint32_t>(std::stoul(f[1]));
    r.sigma2 = *parse_double(f[2]);
    r.mode = parse_mode(f[3]);
    r.q_total = parse_double(f[4]);
    r.term_scale_gap = parse_double(f[5]);
    r.term_remainder = parse_double(f[6]);
    r.term_second_deriv = parse_double(f[7]);
    r.total = parse_double(f[8]);
    r.exact_w1 = parse_double(f[9]);
    r.empirical_w1 = parse_double(f[10]);
    r.reps = parse_u64(f[11]);
    r.seed = parse_u64(f[12]);
    r.wall_ms = parse_double(f[13]);
    r.q_edge = parse_double(f[14]);
    r.q_interior = parse_double(f[15]);
    r.empirical_ok = parse_bool(f[16]);
    r.bound_ok = parse_bool(f[17]);
    r.error = f[18];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n},
                   {"k", r.k},
                   {"sigma2", r.sigma2},
                   {"mode", mode_name(r.mode)},
                   {"q_total", opt_json(r.q_total)},
                   {"term_scale_gap", opt_json(r.term_scale_gap)},
                   {"term_remainder", opt_json(r.term_remainder)},
                   {"term_second_deriv", opt_json(r.term_second_deriv)},
                   {"total", opt_json(r.total)},
                   {"exact_w1", opt_json(r.exact_w1)},
                   {"empirical_w1", opt_json(r.empirical_w1)},
                   {"reps", opt_json(r.reps)},
                   {"seed", opt_json(r.seed)},
                   {"wall_ms", opt_json(r.wall_ms)},
                   {"q_edge", opt_json(r.q_edge)},
                   {"q_interior", opt_json(r.q_interior)},
                   {"empirical_ok", opt_json(r.empirical_ok)},
                   {"bound_ok", opt_json(r.bound_ok)},
                   {"error", r.error.empty() ? json(nullptr) : json(r.error)}});
  }
  return arr.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_json(std::string_view text) {
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed JSON: ") + e.what());
  }
  if (!arr.is_array()) throw std::runtime_error("expected a JSON array of rows");
  std::vector<ResultRow> rows;
  for (const auto& j : arr) {
    ResultRow r;
    r.n = j.at("n").get<std::uint64_t>();
    r.k = j.at("k").get<std::uint32_t>();
    r.sigma2 = j.at("sigma2").get<double>();
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.q_total = json_opt<double>(j, "q_total");
    r.term_scale_gap = json_opt<double>(j, "term_scale_gap");
    r.term_remainder = json_opt<double>(j, "term_remainder");
    r.term_second_deriv = json_opt<double>(j, "term_second_deriv");
    r.total = json_opt<double>(j, "total");
    r.exact_w1 = json_opt<double>(j, "exact_w1");
    r.empirical_w1 = json_opt<double>(j, "empirical_w1");
    r.reps = json_opt<std::uint64_t>(j, "reps");
    r.seed = json_opt<std::uint64_t>(j, "seed");
    r.wall_ms = json_opt<double>(j, "wall_ms");
    r.q_edge = json_opt<double>(j, "q_edge");
    r.q_interior = json_opt<double>(j, "q_interior");
    r.empirical_ok = json_opt<bool>(j, "empirical_ok");
    r.bound_ok = json_opt<bool>(j, "bound_ok");
    r.error = json_opt<std::string>(j, "error").value_or("");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string rate_to_csv(const RateFit& fit) {
  std::ostringstream out;
  out << kRateCsvColumns << '\n';
  for (const auto& p : fit.points) {
    out << p.n << ',' << fit.k << ',' << mode_name(fit.mode) << ',' << fmt_double(p.total) << ','
        << fmt_double(p.term_scale_gap) << ',' << fmt_double(p.fitted_log_total) << ','
        << fmt_double(p.residual) << ',' << fmt_double(fit.slope) << ','
        << fmt_double(fit.intercept) << ',' << fmt_double(fit.r_squared) << ','
        << fmt_double(fit.scale_gap_slope) << '\n';
  }
  return out.str();
}

std::string rate_to_json(const RateFit& fit) {
  json points = json::array();
  for (const auto& p : fit.points) {
    points.push_back({{"n", p.n},
                      {"total", p.total},
                      {"term_scale_gap", p.term_scale_gap},
                      {"fitted_log_total", p.fitted_log_total},
                      {"residual", p.residual}});
  }
  json j{{"k", fit.k},
         {"mode", mode_name(fit.mode)},
         {"slope", fit.slope},
         {"intercept", fit.intercept},
         {"r_squared", fit.r_squared},
         {"scale_gap_slope", fit.scale_gap_slope},
         {"points", points}};
  return j.dump(2) + "\n";
}

}  // namespace mlebound
