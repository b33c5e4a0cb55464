#pragma once

#include <iosfwd>

#include "switchcontrol/config.hpp"
#include "switchcontrol/verify.hpp"

namespace swc {

/// Exit codes shared by the CLI commands.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitAborted = 2 };

ContinuationReport run_continuation(const RunConfig& cfg, double beta, std::ostream& log);

int cmd_run(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_prox_table(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const verify::Options& opts, std::ostream& log);

}  // namespace swc
