#ifndef KRSPEC_CLI_HPP
#define KRSPEC_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace krs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Run one command. `args` excludes the program name. The report goes to
/// `out` in a single write; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace krs::cli

#endif  // KRSPEC_CLI_HPP
