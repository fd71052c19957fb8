#pragma once

#include <iosfwd>

namespace mpcorr::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kParseError = 1, kValidationError = 2, kUnsupportedShape = 3, kBadSpec = 4 };

/// Entry point of the `mpcorr` tool; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mpcorr::cli
