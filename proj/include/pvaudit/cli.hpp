#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pvaudit::cli {

// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1, // bad input data, unreadable file, reproduction mismatch
    kUsageError = 2,
    kFixtureIncomplete = 3,
};

struct Environment {
    std::optional<std::string> out_dir;          // PVAUDIT_OUT
    std::optional<std::string> supplemental_dir; // PVAUDIT_SUPPLEMENTAL_DIR

    static Environment from_process();
};

// Entry point behind the `pvaudit` binary. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = {});

} // namespace pvaudit::cli
