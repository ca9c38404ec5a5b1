#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oiso::cli {

/// Runs one command line (without the program name). The JSON report goes
/// to `out` (and to --json-out when given), diagnostics to `err`.
/// Returns 0 on success, 2 on a mathematical rejection, 1 on usage or IO
/// errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace oiso::cli
