#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cartanlab {

/// Runs one CLI invocation; `args` excludes the program name.
/// Exit codes: 0 all PASS/FLAT, 1 any FAIL/NOT-FLAT, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cartanlab
