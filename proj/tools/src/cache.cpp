#include "mdicke/cli/cache.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace mdicke::cli {

namespace {

constexpr std::string_view kFormat = "mdicke-ground-state-1";

// Exact hexadecimal mantissa/exponent text, without a 0x prefix.
std::string hex(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::hex);
  return std::string(buf, res.ptr);
}

bool read_hex(const std::string& token, double& x) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, x, std::chars_format::hex);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

std::string canonical_key(const ModelParams& p, const SolverConfig& c) {
  std::ostringstream os;
  os << kFormat << ";omega=" << hex(p.omega) << ";delta=" << hex(p.delta) << ";lambda=" << hex(p.lambda)
     << ";Omega=" << hex(p.capital_omega) << ";N=" << p.n_atoms << ";energy_rtol=" << hex(c.energy_rtol)
     << ";lanczos_tol=" << hex(c.lanczos_tol) << ";n_tr_start=" << c.n_tr_start
     << ";n_tr_step=" << c.n_tr_step << ";n_tr_max=" << c.n_tr_max
     << ";max_lanczos_iters=" << c.max_lanczos_iters << ";seed=" << c.seed;
  return os.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

GroundStateCache::GroundStateCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::filesystem::path GroundStateCache::entry_path(const std::string& key) const {
  char name[17];
  std::snprintf(name, sizeof name, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return dir_ / (std::string(name) + ".gs");
}

std::optional<GroundState> GroundStateCache::lookup(const ModelParams& params,
                                                    const SolverConfig& config) const {
  if (!enabled()) return std::nullopt;
  const std::string key = canonical_key(params, config);
  const auto path = entry_path(key);
  std::ifstream in(path);
  if (!in) return std::nullopt;

  auto corrupt = [&path](const char* why) -> std::optional<GroundState> {
    std::cerr << "warning: ignoring cache entry " << path.string() << ": " << why << '\n';
    return std::nullopt;
  };

  std::string stored_key;
  if (!std::getline(in, stored_key)) return corrupt("unreadable");
  if (stored_key != key) return corrupt("key mismatch");

  int two_j = 0, n_tr = 0, converged = 0, n_tr_used = 0;
  std::string energy_tok, residual_tok;
  if (!(in >> two_j >> n_tr >> converged >> n_tr_used >> energy_tok >> residual_tok)) {
    return corrupt("truncated header");
  }
  double energy = 0.0, residual = 0.0;
  if (!read_hex(energy_tok, energy) || !read_hex(residual_tok, residual)) {
    return corrupt("bad number");
  }
  if (two_j < 0 || two_j > params.n_atoms || n_tr < 0 || n_tr > config.n_tr_max) {
    return corrupt("bad sector");
  }
  const SectorBasis sector(two_j, n_tr);
  std::vector<double> values(sector.dimension());
  std::string tok;
  for (double& v : values) {
    if (!(in >> tok) || !read_hex(tok, v)) return corrupt("truncated coefficients");
  }
  if (in >> tok) return corrupt("trailing data");

  return GroundState{params, sector, energy, CoefficientTable(sector, std::move(values)), converged != 0,
                     n_tr_used, residual};
}

void GroundStateCache::store(const GroundState& gs, const SolverConfig& config) const {
  if (!enabled()) return;
  const std::string key = canonical_key(gs.params, config);
  const auto path = entry_path(key);
  std::ostringstream tid;
  tid << std::this_thread::get_id();
  auto tmp = path;
  tmp += ".tmp." + tid.str();
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << key << '\n'
        << gs.sector.two_j() << ' ' << gs.sector.n_tr() << ' ' << (gs.converged ? 1 : 0) << ' '
        << gs.n_tr_used << ' ' << hex(gs.energy) << ' ' << hex(gs.residual) << '\n';
    for (double v : gs.coefficients.values()) out << hex(v) << '\n';
    if (!out) {
      std::cerr << "warning: could not write cache entry " << tmp.string() << '\n';
      return;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::cerr << "warning: could not publish cache entry " << path.string() << ": " << ec.message() << '\n';
    std::filesystem::remove(tmp, ec);
  }
}

GroundState cached_ground_state(const GroundStateCache& cache, const ModelParams& params,
                                const SolverConfig& config) {
  if (auto hit = cache.lookup(params, config)) return std::move(*hit);
  GroundState gs = ground_state(params, config);
  cache.store(gs, config);
  return gs;
}

}  // namespace mdicke::cli
