#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fjscale::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitBudget = 3;

inline constexpr int kSchemaVersion = 1;

/// Runs one command line (args[0] is the program name). Data goes to `out`
/// unless an --out file is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fjscale::cli
