#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uvkv::cli {

// Runs one command line (without the program name). Results go to `out`
// unless --out names a file; diagnostics go to `err`. Returns the exit code.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace uvkv::cli
