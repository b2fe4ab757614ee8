#pragma once

#include <string>
#include <vector>

namespace sqmc {

struct VerifyConfig {
  int d = 2;
  double r = 4.0;
  double gamma = 0.5;
  int max_degree = 8;
  std::uint64_t seed = 20240801;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the library's invariant suite at one configuration: exact basis
/// identities, kernel dual-path agreement, series/bound consistency and
/// the worst-case-error identities. Pure; failures are reported, not
/// thrown.
std::vector<CheckResult> run_verification(const VerifyConfig& config);

}  // namespace sqmc
