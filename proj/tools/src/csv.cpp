#include "mdicke/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mdicke::cli {

std::string format_number(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("format_number: non-finite value");
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

const std::vector<std::string_view>& result_columns() {
  static const std::vector<std::string_view> cols{
      "N",        "j",                "lambda",          "Omega",  "n_tr_used",
      "converged", "energy",          "energy_per_atom", "d2E_dlambda2",
      "photons_per_atom", "fs_avg",   "concurrence",     "scaled_concurrence"};
  return cols;
}

namespace {

void put(std::ostream& os, const std::optional<double>& v) {
  if (v) os << format_number(*v);
}

}  // namespace

void write_rows(std::ostream& os, const std::vector<ResultRow>& rows) {
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const ResultRow& r : rows) {
    os << r.n_atoms << ',';
    if (r.two_j) os << format_number(0.5 * *r.two_j);
    os << ',' << format_number(r.lambda) << ',' << format_number(r.capital_omega) << ',';
    if (r.n_tr_used) os << *r.n_tr_used;
    os << ',' << (r.converged ? 1 : 0) << ',';
    put(os, r.energy);
    os << ',';
    put(os, r.energy_per_atom);
    os << ',';
    put(os, r.d2E_dlambda2);
    os << ',';
    put(os, r.photons_per_atom);
    os << ',';
    put(os, r.fs_avg);
    os << ',';
    put(os, r.concurrence);
    os << ',';
    put(os, r.scaled_concurrence);
    os << '\n';
  }
}

void Table::write(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

}  // namespace mdicke::cli
