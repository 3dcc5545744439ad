#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dslice::cli {

/// Runs the `dslice` command line. `args` excludes the program name.
/// Returns the process exit code: 0 success, 1 error or failed check,
/// 2 inconclusive verification.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dslice::cli
