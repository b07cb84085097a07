#pragma once

namespace hemu {

/// Entry point of the `hemu` command-line tool; returns the exit status.
int run_cli(int argc, char** argv);

}  // namespace hemu
