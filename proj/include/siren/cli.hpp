#pragma once

#include <iosfwd>

namespace siren {

//! Exit statuses of the command-line tool.
enum ExitCode : int
{
  exit_ok = 0,
  exit_user_error = 1,
  exit_internal_error = 2
};

//! Entry point of the `siren` tool; verbs simulate, estimate, oracle-bandwidth,
//! rates and calibrate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace siren
