#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vflab {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0;      // measured quantity
  double threshold = 0;  // pass if value < threshold (or as described)
  std::string detail;
};

// The cross-module invariant battery behind the `validate` subcommand:
// every check runs in seconds and exercises one structural identity.
std::vector<CheckResult> run_validation_suite(uint64_t seed = 1234,
                                              bool parallel = true);

}  // namespace vflab
