#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mfq::cli {

struct CheckResult {
  std::string name;
  double residual;
  double tol;
  bool pass() const { return residual <= tol; }
};

const std::vector<std::string>& check_suites();
// eps builds the spaces; assumed_eps enters the identities being checked.
std::vector<CheckResult> run_suite(const std::string& suite, double eps, double assumed_eps, std::uint64_t seed);

}  // namespace mfq::cli
