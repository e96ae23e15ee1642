#pragma once

// The sevrel command-line front end as a callable function, so the exit-code
// contract can be tested without spawning processes.

#include <iosfwd>
#include <string>
#include <vector>

namespace sevrel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRejectFrequency = 3;
inline constexpr int kExitExtremeRedesign = 4;
inline constexpr int kExitExpectationFailed = 5;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sevrel::cli
