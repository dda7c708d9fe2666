#pragma once

#include <json.hpp>

#include "twoeq/cli/config.hpp"

namespace twoeq::cli {

/// Runs one command and writes its artifacts into `config.out_dir`:
/// summary.json always, trajectory.csv (or the command's table) for
/// commands that produce one, and plot.svg when requested. Returns the
/// summary that was written.
nlohmann::json run_command(const RunConfig& config);

}  // namespace twoeq::cli
