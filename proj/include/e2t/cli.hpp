#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "e2t/config.hpp"

namespace e2t::cli {

enum ExitCode : int { kHolds = 0, kFails = 1, kInconclusive = 2, kInputError = 3 };

/// Runs one command line (without the program name). Text goes to `out`
/// unless --json is given, in which case `out` receives a single JSON object
/// with fields command, input, holds, witnesses, failures, seed, elapsed_ms.
/// Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const config::Env& env = config::process_env());

}  // namespace e2t::cli
