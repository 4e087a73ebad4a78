#pragma once

#include <iosfwd>

namespace lrq {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Entry point of the command-line driver. Returns the process exit code:
/// 0 success, 2 invalid input, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrq
