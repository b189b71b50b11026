#pragma once

#include <string>
#include <vector>

namespace clonedecomp {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNotConverged = 3;

/// Entry point behind main(); args exclude the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace clonedecomp
