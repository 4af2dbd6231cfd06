#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rezoner::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Exit codes: 0 success, 1 domain violation, 2 input or usage error.
/// Errors are written to `err` as a single JSON object.
int run(int argc, const char* const argv[], std::ostream& out, std::ostream& err);
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rezoner::cli
