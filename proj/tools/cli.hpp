#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1; // runtime, I/O or data error
inline constexpr int kExitUsage = 2;

// Entry point of the qad tool; args exclude the program name. Output without
// --out goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "start:stop:step" (inclusive, 0 <= start <= stop <= 1, step > 0) or a comma
// list. Throws std::invalid_argument on malformed input.
std::vector<double> parse_grid(const std::string& text);

} // namespace qad::cli
