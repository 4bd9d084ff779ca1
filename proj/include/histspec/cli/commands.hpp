#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace histspec::cli {

// Process exit statuses.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,         // bad flags or arguments
    kBadInput = 2,      // unreadable or malformed input file
    kMismatch = 3,      // dimension, level-count or histogram mismatch
    kCapacity = 4,      // watermark does not fit / no signal to detect
    kNumerical = 5,     // non-finite values or degenerate computation
};

// Runs the command line `args` (args[0] is the program name). Results go to
// `out` as key=value lines, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace histspec::cli
