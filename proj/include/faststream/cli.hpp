#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace faststream::cli {

// Subcommands: cluster, eval, sweep-di, build-sot, bench. Returns the process
// exit code; 0 only when every requested artifact was written.
int run(int argc, char** argv);

// Same, with arguments (excluding the program name) and streams supplied by
// the caller.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace faststream::cli
