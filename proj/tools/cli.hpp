#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ultralevy::cli {

/// Runs the `ultralevy` command line on `args` (without the program name). Returns the
/// process exit status: 0 on success, nonzero on any parse, validation or runtime error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ultralevy::cli
