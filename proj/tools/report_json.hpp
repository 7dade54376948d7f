#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "gof/critical.hpp"

namespace gof::cli {

// Rounds to `digits` significant digits, the way the text output does.
inline double round_sig(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::stod(buf);
}

inline std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline nlohmann::json report_to_json(const TestReport& r, int digits) {
  nlohmann::json j;
  j["stat"] = std::string(to_string(r.spec.stat));
  j["n"] = r.spec.n;
  j["alpha"] = r.spec.alpha;
  j["value"] = round_sig(r.statistic, digits);
  j["critical_value"] = round_sig(r.critical_value, digits);
  j["p_value"] = round_sig(r.p_value, digits);
  j["reject"] = r.reject;
  j["method"] = std::string(to_string(r.spec.method));
  if (r.argmax_location) {
    j["argmax_location"] = round_sig(*r.argmax_location, digits);
  } else {
    j["argmax_location"] = nullptr;
  }
  return j;
}

inline TestReport report_from_json(const nlohmann::json& j) {
  TestReport r;
  r.spec.stat = parse_test_stat(j.at("stat").get<std::string>());
  r.spec.n = j.at("n").get<std::size_t>();
  r.spec.alpha = j.at("alpha").get<double>();
  r.spec.method = parse_method(j.at("method").get<std::string>());
  r.statistic = j.at("value").get<double>();
  r.critical_value = j.at("critical_value").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.reject = j.at("reject").get<bool>();
  if (j.contains("argmax_location") && !j.at("argmax_location").is_null()) {
    r.argmax_location = j.at("argmax_location").get<double>();
  }
  return r;
}

}  // namespace gof::cli
