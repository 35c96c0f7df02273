#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitFitFailure = 3;

// Runs one command. `args` excludes the program name. Diagnostics go to
// `err` as a single "error[Code]: message" line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdb::cli
