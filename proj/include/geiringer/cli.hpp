#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace geiringer::cli {

enum ExitCode : int { kOk = 0, kError = 1, kCapExceeded = 2 };

/// Seed used when --seed is absent: $GEIRINGER_SEED if set, else 0xC0FFEE.
std::uint64_t default_seed();

/// Runs one command line (without the program name). Reports go to `out`, diagnostics
/// to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geiringer::cli
