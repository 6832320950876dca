#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrceval::cli {

/// Runs the command line `args` (without the program name).
///
/// Exit codes: 0 success, 1 input or validation failure (diagnostics on
/// `err`), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrceval::cli
