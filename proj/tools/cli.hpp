#pragma once

// Experiment runner behind the slrank executable.
//
// Exit codes: 0 all assertions hold, 1 an assertion failed (witness on err),
// 2 invalid input, 3 a resource cap would be exceeded.

#include <iosfwd>
#include <string>
#include <vector>

namespace slrank::cli {

inline constexpr int kOk = 0;
inline constexpr int kAssertionFailed = 1;
inline constexpr int kInvalidInput = 2;
inline constexpr int kResourceCap = 3;

// Overrides the default size cap of every subcommand unless --cap is given.
inline constexpr const char* kCapEnv = "SLRANK_CAP";

// `args` excludes the program name. The artifact goes to --out when given
// (written to a temporary file and renamed into place), otherwise to `out`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace slrank::cli
