#ifndef RADSENS_CLI_HPP
#define RADSENS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace radsens::cli {

/// Exit codes: 0 success, 1 bad input or usage, 2 internal failure.
enum ExitCode { ok = 0, invalid = 1, internal = 2 };

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace radsens::cli

#endif
