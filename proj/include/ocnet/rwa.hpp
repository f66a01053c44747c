#pragma once

// Optical-bypass baseline: dedicated 1+1 protection, first-fit wavelength
// assignment, no coding.

#include <algorithm>
#include <numeric>
#include <vector>

#include "ocnet/model.hpp"
#include "ocnet/pathing.hpp"

namespace ocnet {

enum class OrderPolicy {
  longest_first,  // longest shortest-path first, demand id breaks ties
  as_given,
};

/// Smallest wavelength free on every link of both paths.
inline Wavelength first_fit_wavelength(const Occupancy& grid, const CandidatePair& pair) {
  for (Wavelength w = 1; w <= grid.wavelengths(); ++w)
    if (grid.all_free(pair.working.links(), w) && grid.all_free(pair.backup.links(), w)) return w;
  throw NoWavelength("no wavelength free on both " + pair.working.to_string() + " and " +
                     pair.backup.to_string());
}

/// Processing order as indices into demands.
inline std::vector<std::size_t> demand_order(const std::vector<Demand>& demands,
                                             const CandidateSet& candidates, OrderPolicy policy) {
  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (policy == OrderPolicy::as_given) return order;
  auto shortest = [&](std::size_t i) {
    int best = std::numeric_limits<int>::max();
    for (const auto& p : candidates[i]) best = std::min(best, p.working.hops());
    return best;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    int hx = shortest(x), hy = shortest(y);
    if (hx != hy) return hx > hy;
    return demands[x].id < demands[y].id;
  });
  return order;
}

/// For each demand in policy order, takes the first candidate pair (in ranked
/// order) that has a common free wavelength, first-fit. Working and backup
/// share the wavelength. Throws Blocked naming the first demand that fits
/// nowhere.
inline Solution solve_rwa(const Topology& topo, const std::vector<Demand>& demands,
                          const CandidateSet& candidates,
                          OrderPolicy policy = OrderPolicy::longest_first) {
  if (candidates.size() != demands.size())
    throw ValidationError("candidate set does not match demand list");
  Occupancy grid(topo.link_count(), topo.wavelengths());
  std::vector<ProtectedAssignment> assignments(demands.size());
  for (std::size_t i : demand_order(demands, candidates, policy)) {
    const Demand& d = demands[i];
    if (candidates[i].empty())
      throw Blocked(d.id, "demand " + std::to_string(d.id) + " has no candidate pair");
    bool placed = false;
    for (const auto& pair : candidates[i]) {
      Wavelength w = 0;
      try {
        w = first_fit_wavelength(grid, pair);
      } catch (const NoWavelength&) {
        continue;
      }
      for (LinkId l : pair.working.links()) grid.set(l, w);
      for (LinkId l : pair.backup.links()) grid.set(l, w);
      assignments[i] = {d.id, pair.working, w, pair.backup, w};
      placed = true;
      break;
    }
    if (!placed)
      throw Blocked(d.id, "demand " + std::to_string(d.id) + " (" + std::to_string(d.source) +
                              "->" + std::to_string(d.destination) + ") blocked with " +
                              std::to_string(topo.wavelengths()) + " wavelengths");
  }
  return make_solution(topo, std::move(assignments), {});
}

}  // namespace ocnet
