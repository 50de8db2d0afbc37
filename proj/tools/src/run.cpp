#include "mdicke/cli/run.hpp"

#include "mdicke/cli/cache.hpp"
#include "mdicke/meanfield.hpp"
#include "mdicke/observables.hpp"
#include "mdicke/scaling.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#ifndef MDICKE_VERSION
#define MDICKE_VERSION "unknown"
#endif

namespace mdicke::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void parallel_for(std::size_t count, int width, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, width));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

struct PointTask {
  ModelParams params;
  bool with_fs = false;
};

ModelParams make_params(const RunConfig& cfg, int n, double lambda, double cap_omega) {
  ModelParams p;
  p.omega = cfg.omega;
  p.delta = cfg.delta;
  p.lambda = lambda;
  p.capital_omega = cap_omega;
  p.n_atoms = n;
  p.validate();
  return p;
}

ResultRow evaluate(const PointTask& task, const RunConfig& cfg, const GroundStateCache& cache) {
  ResultRow row;
  row.n_atoms = task.params.n_atoms;
  row.lambda = task.params.lambda;
  row.capital_omega = task.params.capital_omega;

  std::optional<GroundState> gs;
  try {
    gs = cached_ground_state(cache, task.params, cfg.solver);
  } catch (const LanczosError& e) {
    std::cerr << "warning: N=" << row.n_atoms << " lambda=" << row.lambda << " Omega=" << row.capital_omega
              << ": " << e.what() << '\n';
    return row;
  }
  row.two_j = gs->sector.two_j();
  row.n_tr_used = gs->n_tr_used;
  row.converged = gs->converged;
  row.energy = gs->energy;
  row.energy_per_atom = gs->energy / row.n_atoms;
  if (!gs->converged) return row;

  const ObservableRecord rec = measure(*gs);
  row.photons_per_atom = rec.photons_per_atom;
  row.concurrence = rec.concurrence;
  row.scaled_concurrence = rec.scaled_concurrence;

  if (task.with_fs) {
    try {
      row.fs_avg = fidelity_susceptibility(task.params, cfg.delta_lambda, cfg.solver).average;
    } catch (const SectorChangeError&) {
      // undefined across a level crossing
    } catch (const LanczosError& e) {
      std::cerr << "warning: fidelity at lambda=" << row.lambda << ": " << e.what() << '\n';
    }
  }
  return row;
}

std::vector<ResultRow> evaluate_all(const std::vector<PointTask>& tasks, const RunConfig& cfg) {
  const GroundStateCache cache = cfg.cache_dir.empty() ? GroundStateCache{} : GroundStateCache{cfg.cache_dir};
  std::vector<ResultRow> rows(tasks.size());
  parallel_for(tasks.size(), cfg.width, [&](std::size_t i) {
    rows[i] = evaluate(tasks[i], cfg, cache);
    rows[i].index = i;
  });
  return rows;
}

// Second differences along each run of consecutive rows sharing (N, Omega).
void fill_second_derivatives(std::vector<ResultRow>& rows, std::size_t run_length) {
  if (run_length < 3) return;
  for (std::size_t first = 0; first + run_length <= rows.size(); first += run_length) {
    std::vector<double> lambda, energy;
    for (std::size_t i = first; i < first + run_length; ++i) {
      if (!rows[i].energy || !rows[i].converged) break;
      lambda.push_back(rows[i].lambda);
      energy.push_back(*rows[i].energy);
    }
    if (lambda.size() != run_length) continue;
    const SecondDerivativeCurve d2 = energy_second_derivative(lambda, energy);
    for (std::size_t k = 0; k < run_length; ++k) rows[first + k].d2E_dlambda2 = d2.value[k];
  }
}

std::vector<PointTask> grid_tasks(const RunConfig& cfg, bool with_fs) {
  std::vector<PointTask> tasks;
  for (int n : cfg.n_atoms) {
    for (double om : cfg.capital_omega.values()) {
      for (double l : cfg.lambda.values()) tasks.push_back({make_params(cfg, n, l, om), with_fs});
    }
  }
  return tasks;
}

json config_echo(const RunConfig& cfg) {
  return json{{"command", std::string(command_name(cfg.command))},
              {"N", cfg.n_atoms},
              {"omega", cfg.omega},
              {"delta", cfg.delta},
              {"lambda", cfg.lambda.to_string()},
              {"Omega", cfg.capital_omega.to_string()},
              {"delta-lambda", cfg.delta_lambda},
              {"seed", cfg.solver.seed},
              {"energy-rtol", cfg.solver.energy_rtol},
              {"lanczos-tol", cfg.solver.lanczos_tol},
              {"n-tr-max", cfg.solver.n_tr_max},
              {"width", cfg.width},
              {"cache", cfg.cache_dir}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  p += suffix;
  return p;
}

void write_sidecar(const RunConfig& cfg, std::size_t rows, const std::vector<fs::path>& outputs) {
  json files = json::array();
  for (const auto& p : outputs) files.push_back(p.filename().string());
  const json doc{{"version", MDICKE_VERSION}, {"config", config_echo(cfg)}, {"rows", rows}, {"outputs", files}};
  open_output(sibling(cfg.out, ".meta.json")) << doc.dump(2) << '\n';
}

int run_point(const RunConfig& cfg, std::ostream& out) {
  const auto tasks = grid_tasks(cfg, true);
  const ResultRow row = evaluate_all(tasks, cfg).front();
  json rec{{"N", row.n_atoms},
           {"j", row.two_j ? json(0.5 * *row.two_j) : json(nullptr)},
           {"lambda", row.lambda},
           {"Omega", row.capital_omega},
           {"n_tr_used", row.n_tr_used ? json(*row.n_tr_used) : json(nullptr)},
           {"converged", row.converged},
           {"energy", optional_json(row.energy)},
           {"energy_per_atom", optional_json(row.energy_per_atom)},
           {"photons_per_atom", optional_json(row.photons_per_atom)},
           {"fs_avg", optional_json(row.fs_avg)},
           {"concurrence", optional_json(row.concurrence)},
           {"scaled_concurrence", optional_json(row.scaled_concurrence)}};
  if (cfg.out.empty()) {
    out << rec.dump(2) << '\n';
  } else {
    open_output(cfg.out) << rec.dump(2) << '\n';
    write_sidecar(cfg, 1, {fs::path(cfg.out)});
  }
  return row.converged ? 0 : 3;
}

// Energies of the forced j = N/2 sector along the sweep, for comparison with
// the variational ground state.
Table symmetric_sector_table(const RunConfig& cfg) {
  const auto tasks = grid_tasks(cfg, false);
  std::vector<std::vector<std::string>> cells(tasks.size());
  parallel_for(tasks.size(), cfg.width, [&](std::size_t i) {
    const ModelParams& p = tasks[i].params;
    std::vector<std::string> line{std::to_string(p.n_atoms), format_number(p.lambda),
                                  format_number(p.capital_omega), "", ""};
    try {
      const GroundState gs = converge_ground_state(p, p.n_atoms, cfg.solver);
      line[3] = format_number(gs.energy);
      line[4] = format_number(gs.energy / p.n_atoms);
    } catch (const LanczosError&) {
    }
    cells[i] = std::move(line);
  });
  return Table{{"N", "lambda", "Omega", "energy_jmax", "energy_per_atom_jmax"}, std::move(cells)};
}

int run_grid(const RunConfig& cfg, std::ostream& out) {
  const bool with_fs = cfg.command != Command::phase_diagram;
  std::vector<ResultRow> rows = evaluate_all(grid_tasks(cfg, with_fs), cfg);
  fill_second_derivatives(rows, static_cast<std::size_t>(cfg.lambda.count));

  if (cfg.out.empty()) {
    write_rows(out, rows);
  } else {
    std::vector<fs::path> outputs{cfg.out};
    auto csv = open_output(cfg.out);
    write_rows(csv, rows);
    if (cfg.command == Command::sweep) {
      outputs.push_back(sibling(cfg.out, ".jmax.csv"));
      auto jmax = open_output(outputs.back());
      symmetric_sector_table(cfg).write(jmax);
    }
    write_sidecar(cfg, rows.size(), outputs);
  }
  const bool all_converged = std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.converged; });
  return all_converged ? 0 : 3;
}

struct FitLine {
  double capital_omega;
  std::string quantity;
  std::optional<double> value;
  std::optional<double> stderr_value;
};

int run_scaling(const RunConfig& cfg) {
  const std::vector<double> omegas = cfg.capital_omega.values();
  const std::vector<double> offsets = cfg.lambda.values();
  const std::size_t sizes = cfg.n_atoms.size();

  // Critical-point solves first, then the fidelity scans, grouped by Omega and N.
  std::vector<PointTask> tasks;
  for (double om : omegas) {
    const double lc = critical_coupling(make_params(cfg, 1, 0.0, om));
    for (int n : cfg.n_atoms) tasks.push_back({make_params(cfg, n, lc, om), false});
  }
  const std::size_t scan_begin = tasks.size();
  for (double om : omegas) {
    const double lc = critical_coupling(make_params(cfg, 1, 0.0, om));
    for (int n : cfg.n_atoms) {
      for (double d : offsets) tasks.push_back({make_params(cfg, n, lc + d, om), true});
    }
  }
  std::vector<ResultRow> rows = evaluate_all(tasks, cfg);

  std::vector<FitLine> fits;
  Table collapse{{"Omega", "N", "nu", "x", "y"}, {}};
  const auto n_values = std::vector<double>(cfg.n_atoms.begin(), cfg.n_atoms.end());

  for (std::size_t o = 0; o < omegas.size(); ++o) {
    const double om = omegas[o];
    std::vector<double> photons, conc;
    for (std::size_t s = 0; s < sizes; ++s) {
      const ResultRow& r = rows[o * sizes + s];
      if (r.photons_per_atom) photons.push_back(*r.photons_per_atom);
      if (r.scaled_concurrence) conc.push_back(*r.scaled_concurrence);
    }
    if (photons.size() == sizes) {
      try {
        const ExponentFit f = loglog_slope_fit(n_values, photons);
        fits.push_back({om, "photon_exponent", f.exponent, f.standard_error});
        fits.push_back({om, "photon_exponent_extrapolated", f.extrapolated_intercept, {}});
      } catch (const std::exception& e) {
        std::cerr << "warning: Omega=" << om << " photon fit: " << e.what() << '\n';
      }
    }
    if (conc.size() == sizes) {
      try {
        const CInfinityFit c = extrapolate_c_infinity(n_values, conc);
        fits.push_back({om, "c_infinity", c.c_inf, {}});
        fits.push_back({om, "theta", c.theta, {}});
        fits.push_back({om, "concurrence_exponent", c.difference_fit.exponent, c.difference_fit.standard_error});
        fits.push_back({om, "concurrence_exponent_extrapolated", c.difference_fit.extrapolated_intercept, {}});
      } catch (const std::exception& e) {
        std::cerr << "warning: Omega=" << om << " concurrence fit: " << e.what() << '\n';
      }
    }

    ScalingDataset data;
    data.observable = "fs_avg";
    std::vector<FsPeak> peaks;
    bool complete = true;
    for (std::size_t s = 0; s < sizes && complete; ++s) {
      SizeCurve curve;
      curve.n_atoms = cfg.n_atoms[s];
      const std::size_t first = scan_begin + (o * sizes + s) * offsets.size();
      for (std::size_t k = 0; k < offsets.size(); ++k) {
        const ResultRow& r = rows[first + k];
        if (!r.fs_avg) {
          complete = false;
          break;
        }
        curve.lambda.push_back(r.lambda);
        curve.value.push_back(*r.fs_avg);
      }
      if (!complete) break;
      try {
        peaks.push_back(locate_fs_peak(curve.lambda, curve.value));
      } catch (const std::exception& e) {
        std::cerr << "warning: Omega=" << om << " N=" << curve.n_atoms << ": " << e.what() << '\n';
        complete = false;
      }
      data.entries.push_back(std::move(curve));
    }
    if (!complete) {
      std::cerr << "warning: Omega=" << om << ": fidelity scan incomplete, no collapse\n";
      continue;
    }
    for (std::size_t s = 0; s < sizes; ++s) {
      fits.push_back({om, "lambda_max_N" + std::to_string(cfg.n_atoms[s]), peaks[s].lambda_max, {}});
      fits.push_back({om, "chi_max_N" + std::to_string(cfg.n_atoms[s]), peaks[s].chi_max, {}});
    }
    try {
      for (auto [name, nu] : {std::pair{"collapse_quality_nu_1_3", 1.0 / 3.0},
                              std::pair{"collapse_quality_nu_2_3", 2.0 / 3.0},
                              std::pair{"collapse_quality_nu_1", 1.0}}) {
        fits.push_back({om, name, collapse_quality(data, nu, peaks), {}});
      }
      const CollapseExponent best = best_collapse_exponent(data, peaks);
      fits.push_back({om, "nu_best", best.nu, {}});
      fits.push_back({om, "collapse_quality_best", best.quality, {}});
      for (double nu : {2.0 / 3.0, best.nu}) {
        for (const CollapsedCurve& c : rescale_fs_curves(data, nu, peaks)) {
          for (std::size_t k = 0; k < c.x.size(); ++k) {
            collapse.cells.push_back({format_number(om), std::to_string(c.n_atoms), format_number(nu),
                                      format_number(c.x[k]), format_number(c.y[k])});
          }
        }
      }
    } catch (const std::exception& e) {
      std::cerr << "warning: Omega=" << om << " collapse: " << e.what() << '\n';
    }
  }

  Table fit_table{{"Omega", "quantity", "value", "stderr"}, {}};
  for (const FitLine& f : fits) {
    fit_table.cells.push_back({format_number(f.capital_omega), f.quantity,
                               f.value ? format_number(*f.value) : "",
                               f.stderr_value ? format_number(*f.stderr_value) : ""});
  }

  const std::vector<fs::path> outputs{cfg.out, sibling(cfg.out, ".fits.csv"), sibling(cfg.out, ".collapse.csv")};
  auto rows_out = open_output(outputs[0]);
  write_rows(rows_out, rows);
  auto fits_out = open_output(outputs[1]);
  fit_table.write(fits_out);
  auto collapse_out = open_output(outputs[2]);
  collapse.write(collapse_out);
  write_sidecar(cfg, rows.size(), outputs);
  return 0;
}

}  // namespace

std::vector<ResultRow> compute_rows(const RunConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows = evaluate_all(grid_tasks(cfg, cfg.command != Command::phase_diagram), cfg);
  fill_second_derivatives(rows, static_cast<std::size_t>(cfg.lambda.count));
  return rows;
}

int run_command(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  switch (cfg.command) {
    case Command::point: return run_point(cfg, out);
    case Command::sweep:
    case Command::phase_diagram:
    case Command::fs_scan: return run_grid(cfg, out);
    case Command::scaling:
      if (cfg.out.empty()) throw std::invalid_argument("scaling writes several files and needs --out");
      return run_scaling(cfg);
  }
  return 2;
}

}  // namespace mdicke::cli
