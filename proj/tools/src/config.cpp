#include "mdicke/cli/config.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <stdexcept>

namespace mdicke::cli {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double x = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc{} || ptr != end || !std::isfinite(x)) {
    throw std::invalid_argument("bad number '" + std::string(text) + "' in " + std::string(what));
  }
  return x;
}

int parse_int(std::string_view text, std::string_view what) {
  int x = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("bad integer '" + std::string(text) + "' in " + std::string(what));
  }
  return x;
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::point: return "point";
    case Command::sweep: return "sweep";
    case Command::phase_diagram: return "phase-diagram";
    case Command::fs_scan: return "fs-scan";
    case Command::scaling: return "scaling";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::point, Command::sweep, Command::phase_diagram, Command::fs_scan,
                    Command::scaling}) {
    if (command_name(c) == name) return c;
  }
  throw std::invalid_argument("unknown command '" + std::string(name) + "'");
}

std::vector<double> Grid::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = start;
    return out;
  }
  // Rounded to 15 significant digits so decimal grids such as 0.55:0.65:3 hit
  // 0.6 rather than its neighbour.
  char buf[32];
  for (int i = 0; i < count; ++i) {
    const double x = start + (stop - start) * static_cast<double>(i) / (count - 1);
    std::snprintf(buf, sizeof buf, "%.15g", x);
    out[static_cast<std::size_t>(i)] = std::strtod(buf, nullptr);
  }
  return out;
}

std::string Grid::to_string() const {
  auto num = [](double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  return num(start) + ":" + num(stop) + ":" + std::to_string(count);
}

Grid parse_grid(std::string_view text) {
  const auto first = text.find(':');
  if (first == std::string_view::npos) {
    const double x = parse_double(text, "grid");
    return Grid{x, x, 1};
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string_view::npos) {
    throw std::invalid_argument("grid '" + std::string(text) + "' must be start:stop:count");
  }
  Grid g{parse_double(text.substr(0, first), "grid start"),
         parse_double(text.substr(first + 1, second - first - 1), "grid stop"),
         parse_int(text.substr(second + 1), "grid count")};
  if (g.count < 1) throw std::invalid_argument("grid count must be at least 1");
  if (g.count == 1 && g.start != g.stop) {
    throw std::invalid_argument("one-point grid needs start == stop");
  }
  return g;
}

void RunConfig::validate() const {
  if (n_atoms.empty()) throw std::invalid_argument("no atom numbers given");
  for (int n : n_atoms) {
    if (n < 1) throw std::invalid_argument("N must be at least 1");
  }
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
  if (lambda.count < 1 || capital_omega.count < 1) throw std::invalid_argument("empty grid");
  if (capital_omega.start < 0.0 || capital_omega.stop < 0.0) {
    throw std::invalid_argument("Omega must be non-negative");
  }
  if (command != Command::scaling && (lambda.start < 0.0 || lambda.stop < 0.0)) {
    throw std::invalid_argument("lambda must be non-negative");
  }
  if (!(delta_lambda > 0.0)) throw std::invalid_argument("delta-lambda must be positive");
  if (width < 1) throw std::invalid_argument("width must be at least 1");
  solver.validate();
  if (command == Command::point && (lambda.count != 1 || capital_omega.count != 1 || n_atoms.size() != 1)) {
    throw std::invalid_argument("point takes a single N, lambda and Omega");
  }
  if (command == Command::scaling && (n_atoms.size() < 4 || lambda.count < 5)) {
    throw std::invalid_argument("scaling needs at least four sizes and five lambda offsets");
  }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Ground states of the Dicke model with interatomic XY coupling"};
  app.set_config("--config", "", "Flat key=value file; keys are the long flag names");
  app.allow_config_extras(false);

  std::string command = "point";
  std::string lambda = "0.5";
  std::string cap_omega = "0";
  app.add_option("--command", command, "point | sweep | phase-diagram | fs-scan | scaling")
      ->check(CLI::IsMember({"point", "sweep", "phase-diagram", "fs-scan", "scaling"}));
  app.add_option("--N", cfg.n_atoms, "Atom number, or a comma list for fs-scan and scaling")
      ->delimiter(',');
  app.add_option("--omega", cfg.omega, "Cavity frequency");
  app.add_option("--delta", cfg.delta, "Atomic splitting");
  app.add_option("--lambda", lambda,
                 "start:stop:count or a value; for scaling, offsets from the critical coupling");
  app.add_option("--Omega", cap_omega, "Interatomic coupling, start:stop:count or a value");
  app.add_option("--delta-lambda", cfg.delta_lambda, "Fidelity step");
  app.add_option("--out", cfg.out, "Output file (stdout when absent)");
  app.add_option("--cache", cfg.cache_dir, "Ground-state cache directory");
  app.add_option("--width", cfg.width, "Worker threads");
  app.add_option("--seed", cfg.solver.seed, "Lanczos start-vector seed");
  app.add_option("--energy-rtol", cfg.solver.energy_rtol, "Truncation convergence tolerance");
  app.add_option("--lanczos-tol", cfg.solver.lanczos_tol, "Lanczos residual tolerance");
  app.add_option("--n-tr-max", cfg.solver.n_tr_max, "Largest boson truncation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }

  cfg.command = parse_command(command);
  cfg.lambda = parse_grid(lambda);
  cfg.capital_omega = parse_grid(cap_omega);
  cfg.validate();
  return cfg;
}

}  // namespace mdicke::cli
