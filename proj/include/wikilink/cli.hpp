#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wikilink {

/// Exit codes of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

/// Runs `wikilink <subcommand> ...`; `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wikilink
