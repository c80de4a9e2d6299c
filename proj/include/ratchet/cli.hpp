#pragma once

namespace ratchet {

// CLI entry point. Exit codes: 0 success, 2 validation/usage error,
// 3 numerical failure.
int run_command(int argc, const char* const* argv);

}  // namespace ratchet
