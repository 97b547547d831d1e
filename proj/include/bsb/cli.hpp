#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bsb::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_failure = 1,
    exit_usage = 2,
    exit_infeasible = 3
};

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Records go to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bsb::cli
