#pragma once

namespace interp {

/// Entry point for the regioncli tool. Exit code 0 = satisfied/success,
/// 1 = condition violated / infeasible, 2 = usage or validation error.
int cli_main(int argc, const char* const* argv);

}  // namespace interp
