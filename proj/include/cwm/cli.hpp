#pragma once

// Command-line front end. Subcommands: fit, classify, select-k, simulate,
// benchmark. Results go to files; diagnostics go to the error stream.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include <ostream>
#include <string>
#include <vector>

namespace cwm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& err);
int run(int argc, const char* const* argv);

// "out.csv" -> "out<suffix>"; paths without a .csv/.json extension get the
// suffix appended.
std::string sibling_path(const std::string& path, const std::string& suffix);

}  // namespace cwm::cli
