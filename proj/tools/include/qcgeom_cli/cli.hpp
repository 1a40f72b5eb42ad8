#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qcgeom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitTrace = 4;
inline constexpr int kExitImmersion = 5;

// Runs one command line (without the program name). Reports go to `out`
// unless --json names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcgeom::cli
