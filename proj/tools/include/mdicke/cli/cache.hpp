#pragma once

#include "mdicke/eigensolver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace mdicke::cli {

/// Exact, text form of everything a ground-state solve depends on.
[[nodiscard]] std::string canonical_key(const ModelParams& params, const SolverConfig& config);

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a(std::string_view bytes);

/// Content-addressed store of ground states, one file per key.  A default
/// constructed cache is disabled: lookups miss and stores are dropped.
class GroundStateCache {
 public:
  GroundStateCache() = default;
  explicit GroundStateCache(std::filesystem::path dir);

  [[nodiscard]] bool enabled() const { return !dir_.empty(); }
  [[nodiscard]] std::filesystem::path entry_path(const std::string& key) const;

  /// Miss on absent, unreadable or corrupt entries; the latter two print a
  /// warning to stderr.
  [[nodiscard]] std::optional<GroundState> lookup(const ModelParams& params,
                                                  const SolverConfig& config) const;
  /// Writes to a temporary file, then renames it into place.
  void store(const GroundState& gs, const SolverConfig& config) const;

 private:
  std::filesystem::path dir_;
};

/// ground_state() through the cache.
[[nodiscard]] GroundState cached_ground_state(const GroundStateCache& cache, const ModelParams& params,
                                              const SolverConfig& config);

}  // namespace mdicke::cli
