#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace isoproxim::cli {

/// Runs the command line tool. Returns the process exit status:
///   0  success
///   2  input error (files, formats, flags)
///   3  numerical failure
///   4  precondition violation (rank out of range, zero matrix, ...)
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace isoproxim::cli
