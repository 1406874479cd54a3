#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pptsep::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kNegative = 1,      ///< the check ran and came out negative
    kInputError = 2,    ///< unreadable file, bad flags
    kPrecondition = 3,  ///< the state is outside the scope of the decomposition
};

/// Runs `pptsep <args...>`. JSON payloads go to `out`, human-readable
/// diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace pptsep::cli
