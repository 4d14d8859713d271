#pragma once

#include <string>

#include "gpe/bench/config.hpp"

namespace gpe::bench {

/// Each command writes its CSV files into config.output_dir together with
/// resolved_config.json and returns the process exit code: 0 iff every
/// requested run finished without a hard solver failure.
int cmd_run(const RunConfig& config);
int cmd_converge(const RunConfig& config);
int cmd_groundstate(const RunConfig& config);
int cmd_stability(const RunConfig& config);

/// Observable CSV header shared by all run outputs.
extern const char* const kObservableColumns;

}  // namespace gpe::bench
