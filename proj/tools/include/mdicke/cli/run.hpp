#pragma once

#include "mdicke/cli/config.hpp"
#include "mdicke/cli/csv.hpp"

#include <functional>
#include <ostream>
#include <vector>

namespace mdicke::cli {

/// Runs fn(0..count-1) on `width` threads.  The first exception is rethrown
/// after all workers stop.
void parallel_for(std::size_t count, int width, const std::function<void(std::size_t)>& fn);

/// Rows of a sweep, phase-diagram or fs-scan run, sorted by grid index.
[[nodiscard]] std::vector<ResultRow> compute_rows(const RunConfig& config);

/// Executes a command, writing to config.out (or `out` when empty) plus a
/// JSON sidecar next to any output file.  Returns the process exit status.
int run_command(const RunConfig& config, std::ostream& out);

}  // namespace mdicke::cli
