#pragma once

namespace ealab::cli {

/// Entry point of the ealab tool. Returns the process exit code:
/// 0 success, 1 usage/config/validation error, 2 runtime error.
int dispatch(int argc, const char* const* argv);

}  // namespace ealab::cli
