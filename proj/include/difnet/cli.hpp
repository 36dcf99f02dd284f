#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace difnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command line (without the program name). Never throws; errors
/// map to kExitUsage or kExitData with a message on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace difnet::cli
