#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace conekit::cli {

// Exit codes. Verdicts map to 0..2; everything above 10 is an error.
inline constexpr int kExitIn = 0;
inline constexpr int kExitOut = 1;
inline constexpr int kExitIndeterminate = 2;
inline constexpr int kExitMalformed = 11;
inline constexpr int kExitDimension = 12;
inline constexpr int kExitPrecondition = 13;
inline constexpr int kExitIo = 14;
inline constexpr int kExitUsage = 15;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conekit::cli
