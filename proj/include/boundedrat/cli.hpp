#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace boundedrat {

// Exit codes: 0 success, 1 validation error, 2 reproduction mismatch.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitMismatch = 2;

int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boundedrat
