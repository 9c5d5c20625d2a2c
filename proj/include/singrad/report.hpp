#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace singrad {

enum class CheckStatus { pass, fail, skipped, inconclusive, exact };

std::string to_string(CheckStatus s);

/// One named numerical assertion.
struct Check {
  std::string name;
  std::string claim;  ///< the mathematical property being asserted
  std::vector<std::pair<std::string, double>> measured;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::fail;
  std::string note;

  bool passed() const { return status != CheckStatus::fail; }
  double value(const std::string& key) const;  ///< throws if the key is absent
  Check& measure(std::string key, double v) {
    measured.emplace_back(std::move(key), v);
    return *this;
  }
};

struct VerificationReport {
  std::vector<Check> checks;
  std::string context;

  bool all_passed() const;
  const Check& find(const std::string& name) const;  ///< throws if absent
  bool contains(const std::string& name) const;
  void append(const VerificationReport& other);
  nlohmann::json to_json() const;
};

}  // namespace singrad
