#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ifsdf {

/// Exit codes of the command-line driver.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

/// Runs the `ifsdf` command line with argv-style arguments (args[0] is the
/// program name). Output files go where --out points; with no --out the result
/// is written to `out`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifsdf
