/**
 * @file cli.hpp
 * @brief The cl-route command line: gen, plan, experiment, verify.
 */

#ifndef CLROUTE_CLI_HPP
#define CLROUTE_CLI_HPP

#include <iosfwd>

namespace clroute::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kIo = 3,
    kSizeLimit = 4,
    kVerifyFailed = 5,
};

/// Parses argv and runs one subcommand; returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace clroute::cli

#endif
