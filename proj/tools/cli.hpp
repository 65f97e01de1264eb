#pragma once

#include <string>
#include <vector>

namespace hazard_bayes::cli {

/// Process exit codes, one per failure category.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kMissingFile = 3,
    kMalformedInput = 4,
    kSamplerFailure = 5,
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace hazard_bayes::cli
