#pragma once

namespace mfirl {

/// Entry point behind main(). Exit codes: 0 success, 1 configuration or
/// usage error, 2 runtime failure.
int run_cli(int argc, char** argv);

}  // namespace mfirl
