#pragma once

// Coding heuristic on top of the bypass baseline:
//   1. solve the baseline (solve_rwa);
//   2. list every pair of backups that may be XOR-coded (enumerate_opportunities);
//   3. walk the list by savings, applying each pair that still fits; when the
//      wavelengths differ, one demand moves onto its partner's (apply_coding).
// Paths never change after step 1, so the result is never worse than the
// baseline.

#include <algorithm>
#include <vector>

#include "ocnet/coding.hpp"
#include "ocnet/model.hpp"
#include "ocnet/rwa.hpp"

namespace ocnet {

struct CodingOpportunity {
  int demand_a = 0;  // smaller id
  int demand_b = 0;
  NodeId destination = 0;
  NodeId coding_node = 0;
  Path suffix;

  int savings() const { return suffix.hops(); }
};

struct NcOptions {
  OrderPolicy order = OrderPolicy::longest_first;
  bool retune = true;
};

/// Pairs with a common destination, mutual working/backup disjointness, a
/// shared backup tail ending at the destination, and neither already coded;
/// ranked by savings descending, then by demand ids.
inline std::vector<CodingOpportunity> enumerate_opportunities(const std::vector<Demand>& demands,
                                                              const Solution& solution) {
  std::vector<CodingOpportunity> out;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    for (std::size_t j = i + 1; j < demands.size(); ++j) {
      const Demand& da = demands[i];
      const Demand& db = demands[j];
      if (da.destination != db.destination) continue;
      if (solution.coding_of(da.id) || solution.coding_of(db.id)) continue;
      const auto* a = solution.find(da.id);
      const auto* b = solution.find(db.id);
      if (!a || !b) continue;
      if (!recovery_disjoint(a->working, a->backup, b->working, b->backup)) continue;
      auto suffix = common_backup_suffix(a->backup, b->backup);
      if (!suffix) continue;
      CodingOpportunity opp{std::min(da.id, db.id), std::max(da.id, db.id), da.destination,
                            suffix->source(), std::move(*suffix)};
      out.push_back(std::move(opp));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const CodingOpportunity& x, const CodingOpportunity& y) {
    if (x.savings() != y.savings()) return x.savings() > y.savings();
    if (x.demand_a != y.demand_a) return x.demand_a < y.demand_a;
    return x.demand_b < y.demand_b;
  });
  return out;
}

/// Records the coding of opp in a copy of solution (strict wavelength mode).
/// Target wavelengths are tried in the order: a's, then b's (needs retune).
/// Throws Stale when the
/// opportunity no longer holds or no common wavelength fits; the input is
/// never modified.
inline Solution apply_coding(const Topology& topo, const std::vector<Demand>& demands,
                             const Solution& solution, const CodingOpportunity& opp,
                             bool retune = true) {
  if (solution.wavelength_mode != WavelengthMode::strict)
    throw ValidationError("apply_coding works on strict-mode solutions");
  auto stale = [&](const std::string& why) {
    return Stale("coding " + std::to_string(opp.demand_a) + "^" + std::to_string(opp.demand_b) +
                 ": " + why);
  };
  const ProtectedAssignment* a = solution.find(opp.demand_a);
  const ProtectedAssignment* b = solution.find(opp.demand_b);
  if (!a || !b || opp.demand_a == opp.demand_b) throw stale("unknown demand");
  auto demand = [&](int id) {
    return std::find_if(demands.begin(), demands.end(), [&](const Demand& d) { return d.id == id; });
  };
  auto da = demand(opp.demand_a), db = demand(opp.demand_b);
  if (da == demands.end() || db == demands.end() || da->destination != db->destination)
    throw stale("destinations differ");
  if (solution.coding_of(opp.demand_a) || solution.coding_of(opp.demand_b))
    throw stale("a demand is already coded");
  if (!recovery_disjoint(a->working, a->backup, b->working, b->backup))
    throw stale("working paths are not disjoint from the partner's routes");
  auto sa = a->backup.suffix_from(opp.coding_node);
  auto sb = b->backup.suffix_from(opp.coding_node);
  if (!sa || !sb || *sa != opp.suffix || *sb != opp.suffix || opp.suffix.hops() < 1)
    throw stale("backups no longer share the coded tail");

  Occupancy base = solution.occupancy;
  for (const auto* x : {a, b}) {
    for (LinkId l : x->working.links()) base.set(l, x->working_wavelength, false);
    for (LinkId l : x->backup.links()) base.set(l, x->backup_wavelength, false);
  }
  const std::size_t b_prefix = b->backup.links().size() - opp.suffix.links().size();
  auto fits = [&](Wavelength w) {
    Occupancy g = base;
    auto take = [&](LinkId l) {
      if (g.used(l, w)) return false;
      g.set(l, w);
      return true;
    };
    for (LinkId l : a->working.links())
      if (!take(l)) return false;
    for (LinkId l : a->backup.links())
      if (!take(l)) return false;
    for (LinkId l : b->working.links())
      if (!take(l)) return false;
    for (std::size_t i = 0; i < b_prefix; ++i)
      if (!take(b->backup.links()[i])) return false;
    return true;
  };

  std::vector<Wavelength> targets{a->working_wavelength};
  if (b->working_wavelength != a->working_wavelength) {
    if (!retune) throw stale("wavelengths differ and re-tuning is off");
    targets.push_back(b->working_wavelength);
  }
  for (Wavelength w : targets) {
    if (!fits(w)) continue;
    auto assignments = solution.assignments;
    for (auto& x : assignments) {
      if (x.demand_id == opp.demand_a || x.demand_id == opp.demand_b) {
        x.working_wavelength = w;
        x.backup_wavelength = w;
      }
    }
    auto codings = solution.codings;
    codings.push_back({opp.demand_a, opp.demand_b, opp.coding_node, opp.suffix, w});
    Solution next = make_solution(topo, std::move(assignments), std::move(codings));
    if (next.occupancy.cost() != solution.occupancy.cost() - opp.savings())
      throw stale("coding did not save the expected links");
    return next;
  }
  throw stale("no common free wavelength");
}

/// Baseline first, then greedy coding in opportunity rank order.
inline Solution solve_rwnca(const Topology& topo, const std::vector<Demand>& demands,
                            const CandidateSet& candidates, const NcOptions& options = {}) {
  Solution current = solve_rwa(topo, demands, candidates, options.order);
  for (const auto& opp : enumerate_opportunities(demands, current)) {
    if (current.coding_of(opp.demand_a) || current.coding_of(opp.demand_b)) continue;
    try {
      current = apply_coding(topo, demands, current, opp, options.retune);
    } catch (const Stale&) {
    }
  }
  return current;
}

}  // namespace ocnet
