#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pfar::cli {

// Exit codes: 0 success, 1 usage, 2 data, 3 numerical failure.
// args[0] is the program name. Config files given by --config are expanded
// in place, below explicit flags; PFAR_WORKERS seeds --workers below both.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pfar::cli
