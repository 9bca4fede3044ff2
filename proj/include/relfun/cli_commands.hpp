#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relfun/types.hpp"

namespace relfun {

/// Formats a double with 12 significant digits ('.' decimal separator,
/// independent of the global locale).  All CSV output goes through this.
[[nodiscard]] std::string format_sig12(double v);

/// Entry point shared by the command-line binary and the test suite.
///
/// `args` holds the raw arguments *without* the program name, e.g.
/// {"constants", "--snr", "4"}.  Human-readable output goes to `out`,
/// diagnostics to `err`.
///
/// Exit codes: 0 success, 1 usage error (bad flags, bad values, unwritable
/// output path), 2 validation failure (`validate` found failing checks),
/// 3 numeric non-convergence inside the library.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relfun
