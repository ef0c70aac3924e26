#pragma once

namespace capsim {

// Entry point for the capsim command-line tool.  Returns the process exit
// code: 0 success / check passed, 1 check failed, 2 usage or input error.
int run_cli(int argc, char** argv);

}  // namespace capsim
