#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mdicke::cli {

/// Shortest decimal that reads back to the same double.
[[nodiscard]] std::string format_number(double x);

struct ResultRow {
  std::size_t index = 0;  // grid position; output is sorted on it
  int n_atoms = 0;
  std::optional<int> two_j;
  double lambda = 0.0;
  double capital_omega = 0.0;
  std::optional<int> n_tr_used;
  bool converged = false;
  std::optional<double> energy;
  std::optional<double> energy_per_atom;
  std::optional<double> d2E_dlambda2;
  std::optional<double> photons_per_atom;
  std::optional<double> fs_avg;
  std::optional<double> concurrence;
  std::optional<double> scaled_concurrence;
};

[[nodiscard]] const std::vector<std::string_view>& result_columns();

/// Header plus one line per row, LF terminated, missing values as empty fields.
void write_rows(std::ostream& os, const std::vector<ResultRow>& rows);

/// Plain CSV table with a header and optional numeric cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> cells;

  void write(std::ostream& os) const;
};

}  // namespace mdicke::cli
