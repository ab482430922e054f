#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arakelov::cli {

// Exit codes: 0 success, 2 invalid input, 3 internal invariant violated.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInternal = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arakelov::cli
