#ifndef POLYA_AEPPLI_TOOLS_CLI_HPP
#define POLYA_AEPPLI_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace polya_aeppli::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // check failures, numerical or I/O errors
inline constexpr int kExitUsage = 2;

/// Runs one command line (args[0] is the program name). Data goes to `out`
/// (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal text that reads back to the same double; "Inf", "-Inf"
/// and "NaN" for the non-finite values. Independent of the global locale.
std::string format_number(double value);

}  // namespace polya_aeppli::cli

#endif  // POLYA_AEPPLI_TOOLS_CLI_HPP
