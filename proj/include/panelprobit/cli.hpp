#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace panelprobit {

/// Command-line entry point. Returns 0 on success, 1 for usage or input
/// errors and 2 for numerical failures of an estimator.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with args excluding the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace panelprobit
