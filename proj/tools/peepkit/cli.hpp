// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace peepkit::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kInsufficientEvidence = 3 };

/// Runs one command line. Results go to `out`; warnings and the one-line JSON
/// error record go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace peepkit::cli
