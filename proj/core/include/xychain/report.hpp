#pragma once

#include <string>
#include <vector>

namespace xychain {

/// Outcome of one numerical certification.
struct CheckReport {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

inline CheckReport make_check(std::string name, double residual, double tolerance,
                              std::string detail = {}) {
  return {std::move(name), residual, tolerance, residual <= tolerance, false, std::move(detail)};
}

inline CheckReport skipped_check(std::string name, std::string reason) {
  return {std::move(name), 0.0, 0.0, true, true, std::move(reason)};
}

inline bool all_pass(const std::vector<CheckReport>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace xychain
