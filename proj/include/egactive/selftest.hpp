#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace egactive {

struct SelftestReport {
  std::size_t checks = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Quick oracle and invariant spot checks over every module.
SelftestReport run_selftest();

}  // namespace egactive
