#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bcu::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 2;
inline constexpr int kParameterError = 3;
inline constexpr int kExhausted = 4;

// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcu::cli
