#pragma once

#include <string>
#include <vector>

namespace tsc::cli {

/// Exit code plus the streams the process would emit. Exit codes: 0 success
/// and all checks passed, 1 a verification reported violations, 2 usage or
/// precondition errors.
struct CliResult {
    int exitCode = 0;
    std::string out;
    std::string err;
};

/// Runs one command line (without the program name).
CliResult dispatch(const std::vector<std::string>& args);

/// Process entry: dispatch, print, return the exit code.
int run(int argc, char** argv);

} // namespace tsc::cli
