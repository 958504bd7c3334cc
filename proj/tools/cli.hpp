#pragma once

#include <iosfwd>

namespace mcar::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kInapplicable = 2;
inline constexpr int kBenchCellFailed = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcar::cli
