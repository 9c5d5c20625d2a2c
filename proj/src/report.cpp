#include "singrad/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace singrad {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::exact: return "exact";
  }
  return "unknown";
}

double Check::value(const std::string& key) const {
  for (const auto& [k, v] : measured)
    if (k == key) return v;
  throw std::out_of_range("check '" + name + "' has no measurement '" + key + "'");
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

bool VerificationReport::contains(const std::string& name) const {
  return std::any_of(checks.begin(), checks.end(),
                     [&](const Check& c) { return c.name == name; });
}

const Check& VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("report has no check named '" + name + "'");
}

void VerificationReport::append(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json out;
  out["context"] = context;
  out["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [k, v] : c.measured) m[k] = v;
    out["checks"].push_back({{"name", c.name},
                             {"claim", c.claim},
                             {"measured", m},
                             {"tolerance", c.tolerance},
                             {"status", to_string(c.status)},
                             {"pass", c.passed()},
                             {"note", c.note}});
  }
  return out;
}

}  // namespace singrad
