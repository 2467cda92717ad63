#pragma once
// Command-line surface. run_cli dispatches one command: data goes to out,
// diagnostics to err, and the return value is the process exit code
// (0 success, 1 runtime/data error, 2 usage error).

#include <iosfwd>
#include <string>
#include <vector>

namespace skycat {

// args excludes the program name. Never throws; every failure becomes an
// exit code plus a one-line diagnostic on err.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace skycat
