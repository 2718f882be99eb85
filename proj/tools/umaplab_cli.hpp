#ifndef UMAPLAB_TOOLS_CLI_HPP
#define UMAPLAB_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace umaplab::cli {

/// Runs the command line in-process. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace umaplab::cli

#endif
