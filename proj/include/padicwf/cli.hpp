#pragma once

// The padicwf command line. Exit codes: 0 ok, 2 parse error, 3 evaluation
// error, 4 a checked assertion failed.

#include <iosfwd>
#include <string>
#include <vector>

namespace padicwf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitEval = 3;
inline constexpr int kExitAssertion = 4;

/// Relative output paths are placed under this directory when it is set.
inline constexpr const char* kOutputDirVariable = "PADICWF_OUTPUT_DIR";

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padicwf
