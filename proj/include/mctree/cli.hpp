#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mctree {

enum ExitCode : int {
    exit_ok = 0,
    exit_verification = 1,
    exit_parse = 2,
    exit_reducible = 3,
    exit_infeasible = 4,
};

// args excludes the program name. `in` is read when no --input is given.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace mctree
