#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levysheet::cli {

/// Exit codes of `run`.
inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;
inline constexpr int kSuiteFailed = 2;

/// Runs one command line (args[0] is the program name). Results go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levysheet::cli
