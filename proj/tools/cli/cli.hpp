#ifndef ZONOVOL_TOOLS_CLI_HPP_
#define ZONOVOL_TOOLS_CLI_HPP_

#include <ostream>

namespace zonovol::cli {

/// Process exit codes of the zonovol command.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,        // bad flags, malformed model file, invalid arguments
  kDomain = 2,       // input outside the domain of the requested formula
  kCheckFailed = 3,  // a property of the check suite failed
};

/// Entry point shared by main() and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zonovol::cli

#endif  // ZONOVOL_TOOLS_CLI_HPP_
