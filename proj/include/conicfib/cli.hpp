#ifndef CONICFIB_CLI_HPP
#define CONICFIB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace conicfib::cli {

/// Process exit codes.
enum ExitCode : int
{
    Success = 0,
    UsageError = 2,
    BudgetExceeded = 3,
    VerificationMismatch = 4,
};

/*
 * Entry point shared by the executable and the tests. args excludes the
 * program name. Artifacts go to --out when given, otherwise to out;
 * diagnostics go to err.
 */
int run(std::vector<std::string> args, std::ostream & out, std::ostream & err);

/// Flat key=value config file: one assignment per line, '#' comments, blank lines ignored.
std::vector<std::pair<std::string, std::string>> read_config_file(std::string const & path);

/// Hex SHA-256 digest.
std::string sha256_hex(std::string const & data);

} // namespace conicfib::cli

#endif
