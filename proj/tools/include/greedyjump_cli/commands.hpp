#pragma once

#include <iosfwd>

#include "greedyjump_cli/config.hpp"

namespace greedyjump::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitIndeterminate = 2;

/// Runs one experiment, writing its CSV/JSON files and manifest.json into
/// config.out_dir. Returns the process exit status: 0 on success, 2 when the
/// dynamics halted at an indeterminate step (partial output is kept), 1 on
/// error. Human-readable messages go to `log`.
int run(const ExperimentConfig& config, std::ostream& log);

}  // namespace greedyjump::cli
