// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wppan {

// Exit codes shared by the CLI and the selftest runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitSolverFailure = 2;
inline constexpr int kExitIoError = 3;

/// Full CLI entry point (run/sweep/hist/selftest). `out` receives file-less
/// payload output, `err` diagnostics. Returns a process exit code.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wppan
