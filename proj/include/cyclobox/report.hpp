#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cyclobox/concentration.hpp"
#include "cyclobox/moments.hpp"
#include "cyclobox/visibility.hpp"

namespace cyclobox {

using Json = nlohmann::ordered_json;

enum class Format { json, csv };

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw std::invalid_argument("unknown format '" + std::string(s) + "' (expected json or csv)");
}

inline Json to_json(const MomentReport& r) {
  Json j;
  j["report"] = "moment";
  j["kind"] = to_string(r.kind);
  j["p"] = r.p;
  j["N"] = r.N;
  j["alpha"] = r.alpha;
  j["value"] = r.formula_value.str();
  j["value_float"] = r.formula_value.to_double();
  if (r.oracle_value) {
    j["oracle_value"] = r.oracle_value->str();
    j["oracle_equal"] = r.consistent();
  } else {
    j["oracle_value"] = nullptr;
    j["oracle_equal"] = nullptr;
  }
  j["verdict"] = r.consistent() ? "pass" : "fail";
  return j;
}

inline Json to_json(const ConcentrationReport& r) {
  Json j;
  j["report"] = "concentration";
  j["theorem"] = to_string(r.theorem);
  j["p"] = r.p;
  j["N"] = r.N;
  j["K"] = r.K;
  j["T"] = r.T;
  j["alpha"] = r.alpha;
  j["epsilon"] = r.epsilon;
  j["eta"] = r.eta;
  j["center_sq"] = r.center_sq;
  j["sample_count"] = r.sample_count;
  j["exhaustive"] = r.exhaustive;
  j["seed"] = r.seed;
  j["empirical_proportion"] = r.empirical_proportion;
  j["bound"] = r.bound;
  j["bound_rule"] = r.bound_rule;
  j["verdict"] = r.verdict();
  if (r.secondary_proportion) {
    j["secondary_proportion"] = *r.secondary_proportion;
    j["secondary_label"] = r.secondary_label;
  } else {
    j["secondary_proportion"] = nullptr;
    j["secondary_label"] = nullptr;
  }
  Json diag = Json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = v;
  j["diagnostics"] = diag;
  return j;
}

inline Json to_json(const VisibilityReport& r) {
  Json j;
  j["report"] = "visibility";
  j["p"] = r.p;
  j["N"] = r.N;
  j["K"] = r.K;
  j["sample_count"] = r.sample_count;
  j["seed"] = r.seed;
  j["attempts"] = r.attempts;
  j["visible_fraction"] = r.visible_fraction;
  j["proportion_near_center"] = r.proportion_near_center;
  j["center"] = r.center;
  j["epsilon"] = r.epsilon;
  j["target"] = r.target;
  j["mean_dist_sq"] = r.mean_dist_sq;
  j["N_over_p"] = r.n_over_p;
  j["regime_warning"] = r.regime_warning;
  j["verdict"] = r.verdict();
  return j;
}

inline Json to_json(const CancellationRecord& r) {
  Json j;
  j["report"] = "cancellation";
  j["p"] = r.p;
  j["N"] = r.N;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"enumerated", c.enumerated.get_str()},
                      {"closed_form", c.closed_form.get_str()},
                      {"equal", c.equal()}});
  }
  j["checks"] = checks;
  j["verdict"] = r.all_equal() ? "pass" : "fail";
  return j;
}

namespace detail {

inline std::string csv_field(const Json& v) {
  if (v.is_null()) return {};
  const std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (const char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  return s;
}

}  // namespace detail

/// CSV header line (no trailing newline) for the flat fields of a report.
inline std::string csv_header(const Json& obj) {
  std::string out;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (it != obj.begin()) out += ',';
    out += it.key();
  }
  return out;
}

inline std::string csv_row(const Json& obj) {
  std::string out;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (it != obj.begin()) out += ',';
    out += detail::csv_field(it.value());
  }
  return out;
}

/**
 * Serializes a batch of same-type reports. JSON: one compact object per
 * line. CSV: a header row followed by one row per report; nested values
 * (diagnostics, checks) are embedded as JSON text.
 */
template <class Report>
std::string emit_reports(const std::vector<Report>& reports, Format format) {
  std::string out;
  if (format == Format::json) {
    for (const auto& r : reports) out += to_json(r).dump() + "\n";
    return out;
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const Json obj = to_json(reports[i]);
    if (i == 0) out += csv_header(obj) + "\n";
    out += csv_row(obj) + "\n";
  }
  return out;
}

template <class Report>
std::string emit_report(const Report& report, Format format) {
  return emit_reports(std::vector<Report>{report}, format);
}

}  // namespace cyclobox
