#pragma once

// Pairing geometry shared by the heuristic and the exact solver.

#include <optional>

#include "ocnet/model.hpp"

namespace ocnet {

/// Longest common tail of two backups that end at the same destination,
/// starting at the node where they merge. Nullopt when they do not share the
/// final link.
inline std::optional<Path> common_backup_suffix(const Path& a, const Path& b) {
  if (a.empty() || b.empty() || a.destination() != b.destination()) return std::nullopt;
  const auto& na = a.nodes();
  const auto& nb = b.nodes();
  std::size_t common = 0;
  while (common < na.size() && common < nb.size() &&
         na[na.size() - 1 - common] == nb[nb.size() - 1 - common])
    ++common;
  if (common < 2) return std::nullopt;
  return a.suffix_from(na[na.size() - common]);
}

/// Working-working and working-backup disjointness between two demands, which
/// keeps XOR recovery alive under any single link failure.
inline bool recovery_disjoint(const Path& working_a, const Path& backup_a, const Path& working_b,
                              const Path& backup_b) {
  return !working_a.shares_link_with(working_b) && !working_a.shares_link_with(backup_b) &&
         !working_b.shares_link_with(backup_a);
}

}  // namespace ocnet
