#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zonenav::cli {

/// Exit codes: 0 success, 1 episode failure (run only), 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitEpisodeFailed = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zonenav::cli
