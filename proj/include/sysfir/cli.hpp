#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sysfir::cli {

enum ExitCode : int {
    ok = 0,
    usage = 1,
    config_invalid = 2,
    file_io = 3,
    module_error = 4,
    check_failed = 5,
};

/// Runs one subcommand. Errors go to err as a single JSON object.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace sysfir::cli
