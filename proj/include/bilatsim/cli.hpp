#pragma once

namespace bilatsim {

/// Entry point for the bilatsim command line tool.
/// Exit codes: 0 success, 1 usage error, 2 runtime failure,
/// 3 when a paper-target check fails in `suite`.
int cli_main(int argc, const char* const* argv);

}  // namespace bilatsim
