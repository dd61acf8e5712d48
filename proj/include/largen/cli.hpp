#pragma once

namespace largen::cli {

// Parses argv, runs one subcommand, and writes its output files. Returns the
// process exit code: 0 success, 2 configuration or validation failure,
// 3 numerical failure. All compute happens before the first file is opened,
// so a failing run leaves no partial outputs behind.
int run_cli(int argc, const char* const* argv);

}  // namespace largen::cli
