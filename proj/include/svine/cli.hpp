#pragma once

namespace svine {

/// Entry point of the svine executable.
///
/// Subcommands: simulate, fit, experiment, residual-qq, kpacf. Every
/// file-writing command also writes a run manifest next to its outputs
/// and is deterministic given (inputs, seed): re-running reproduces the
/// outputs byte for byte.
///
/// Exit codes: 0 success, 2 invalid input, 3 numeric failure, 4 optimizer
/// non-convergence (the flagged fit report is still written).
int run_cli(int argc, const char* const* argv);

}  // namespace svine
