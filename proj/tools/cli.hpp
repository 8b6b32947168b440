#pragma once

#include <iosfwd>

namespace localfeat::cli {

/// Exit codes: 0 success, 1 diagnostics with errors, 2 usage or I/O errors.
enum ExitCode : int { ok = 0, diagnostics = 1, usage = 2 };

/// Runs one command. Diagnostics go to `err`, results and summaries to
/// `out`. `color` enables ANSI severity colouring on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace localfeat::cli
