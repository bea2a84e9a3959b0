#pragma once

namespace seedbank::cli {

// Full CLI entry point (argument parsing, dispatch, error-to-exit-code
// mapping). Exposed for in-process testing.
//   0 success, 2 config error, 3 regime error, 4 resource error.
int run(int argc, const char* const* argv);

} // namespace seedbank::cli
