#pragma once

#include "mdicke/eigensolver.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdicke::cli {

enum class Command { point, sweep, phase_diagram, fs_scan, scaling };

[[nodiscard]] std::string_view command_name(Command c);
[[nodiscard]] Command parse_command(std::string_view name);

/// Inclusive uniform grid "start:stop:count"; a bare number is a one-point grid.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  [[nodiscard]] std::vector<double> values() const;
  [[nodiscard]] std::string to_string() const;
  bool operator==(const Grid&) const = default;
};

[[nodiscard]] Grid parse_grid(std::string_view text);

struct RunConfig {
  Command command = Command::point;
  std::vector<int> n_atoms{4};
  double omega = 1.0;
  double delta = 1.0;
  Grid lambda{0.5, 0.5, 1};
  Grid capital_omega{0.0, 0.0, 1};
  double delta_lambda = 1e-3;
  SolverConfig solver;
  std::string out;        // empty: stdout
  std::string cache_dir;  // empty: no cache
  int width = 1;

  /// Throws std::invalid_argument on an unusable combination.
  void validate() const;
};

/// Parses argv (flags and an optional --config file of key=value lines).
/// Returns std::nullopt after printing help.  Throws std::invalid_argument
/// with a diagnostic on bad input.
[[nodiscard]] std::optional<RunConfig> parse_args(int argc, const char* const* argv);

}  // namespace mdicke::cli
