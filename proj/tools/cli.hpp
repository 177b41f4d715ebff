#pragma once

#include <iosfwd>

namespace cachemodel::cli {

// Exit codes: 0 success, 1 runtime error, 2 usage or validation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cachemodel::cli
