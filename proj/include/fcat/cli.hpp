#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fcat::cli {

// args excludes the program name; returns the process exit code
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcat::cli
