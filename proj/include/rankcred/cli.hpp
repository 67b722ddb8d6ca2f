#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rankcred {

// Exit status: 0 success, 1 data or numeric error, 2 usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankcred
