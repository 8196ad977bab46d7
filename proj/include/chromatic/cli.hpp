#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chromatic {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit statuses of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // budget exhausted, infeasible system, resample limit
inline constexpr int kExitUsage = 2;    // bad flags, unreadable or malformed instance

// Runs one subcommand. `args` excludes the program name. JSON goes to `out`,
// diagnostics to `err`. Timings are reported as 0 unless --timing is given,
// so identical arguments give byte-identical output.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chromatic
