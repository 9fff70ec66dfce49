#pragma once

#include <iosfwd>

#include "nlwave/cli/config.hpp"

namespace nlwave::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

/// Executes cfg.command, writing CSV and summary.json under cfg.out.
/// Runtime failures are written to error.json and return kRuntimeError.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace nlwave::cli
