#pragma once

#include <ostream>

namespace tinynose {

/// Entry point behind the `tinynose` executable. Returns the process exit code;
/// every failure prints exactly one `error: ...` line to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tinynose
