#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace soqo {

// Full command-line driver, callable in-process for tests. args excludes
// the program name. Returns 0 on success, 1 for usage/config errors, 2 for
// runtime failures (I/O, solver).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soqo
