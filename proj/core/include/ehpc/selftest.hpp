#pragma once

#include <string>
#include <vector>

namespace ehpc {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Property suites shared by the CLI `selftest` subcommand and the test
/// binaries. Each check runs its full trial count and reports the worst case.
std::vector<CheckResult> projection_selftest();
std::vector<CheckResult> utility_selftest();
std::vector<CheckResult> controller_selftest();

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace ehpc
