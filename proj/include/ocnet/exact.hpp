#pragma once

// Exact branch-and-bound over the candidate space: per demand a candidate pair,
// a wavelength, and optionally a coding partner among earlier demands with the
// same destination (coding at the head of the longest common backup tail,
// which dominates every later coding node).
//
// Pruning:
//   * wavelength symmetry: a demand may only open wavelength max_used + 1;
//   * a combinatorial bound where a pair coded together is charged at least
//     working + backup / 2 per member (the shared tail is no longer than
//     either backup).
// With the link-cost objective and |W| >= |D|, wavelengths never interact
// across coding groups, so the instance splits by destination and each group
// is searched with one private wavelength per coding group.
//
// Budget policy: the node budget is deterministic; the wall-clock budget is a
// safety net and, if it fires, the incumbent depends on machine speed.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ocnet/coding.hpp"
#include "ocnet/model.hpp"
#include "ocnet/nc_heuristic.hpp"
#include "ocnet/pathing.hpp"
#include "ocnet/rwa.hpp"

namespace ocnet {

enum class ExactStatus { optimal_full, optimal_within_candidates, budget_exhausted };

inline const char* to_string(ExactStatus s) {
  switch (s) {
    case ExactStatus::optimal_full: return "optimal-full";
    case ExactStatus::optimal_within_candidates: return "optimal-within-candidates";
    case ExactStatus::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

struct ExactBudget {
  std::int64_t max_nodes = 50'000'000;
  double max_seconds = 600.0;
};

struct ExactOptions {
  Objective objective = Objective::eq1;
  DesignMode mode = DesignMode::rwnca;
  ExactBudget budget;
  bool full_candidate_space = false;  // candidates came from build_full_candidates
  bool warm_start = true;             // seed the incumbent with the heuristic
  bool decompose = true;
};

struct ExactResult {
  Solution solution;
  ExactStatus status = ExactStatus::optimal_within_candidates;
  LexCost cost;
  std::int64_t nodes = 0;
};

namespace detail {

class BranchAndBound {
 public:
  struct Choice {
    int pair = -1;
    Wavelength wavelength = 0;
    int partner = -1;  // index into the local demand list
    std::optional<Path> suffix;
  };

  BranchAndBound(const Topology& topo, std::vector<Demand> demands, CandidateSet candidates,
                 int wavelengths, const ExactOptions& options, bool fresh_only,
                 std::int64_t node_budget, std::chrono::steady_clock::time_point deadline)
      : topo_(topo),
        demands_(std::move(demands)),
        candidates_(std::move(candidates)),
        wavelengths_(wavelengths),
        options_(options),
        fresh_only_(fresh_only),
        node_budget_(node_budget),
        deadline_(deadline),
        grid_(static_cast<std::size_t>(topo.link_count()) * static_cast<std::size_t>(wavelengths),
              0),
        choice_(demands_.size()) {
    order_.resize(demands_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
    // group by destination, bigger demands first inside a group
    std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) {
      const auto& dx = demands_[static_cast<std::size_t>(x)];
      const auto& dy = demands_[static_cast<std::size_t>(y)];
      if (dx.destination != dy.destination) return dx.destination < dy.destination;
      return min_total(x) > min_total(y);
    });
    for (const auto& d : demands_) remaining_[d.destination]++;
  }

  void seed(const LexCost& cost, std::vector<Choice> choices) {
    best_cost_ = cost;
    best_ = std::move(choices);
  }

  void run() { search(0); }

  bool exhausted() const { return exhausted_; }
  std::int64_t nodes() const { return nodes_; }
  const std::optional<LexCost>& best_cost() const { return best_cost_; }
  const std::vector<Choice>& best() const { return best_; }
  const std::vector<Demand>& demands() const { return demands_; }
  const CandidateSet& candidates() const { return candidates_; }

 private:
  int min_total(int i) const {
    int best = std::numeric_limits<int>::max();
    for (const auto& p : candidates_[static_cast<std::size_t>(i)])
      best = std::min(best, p.total_hops());
    return best;
  }

  bool coding() const { return options_.mode == DesignMode::rwnca; }

  std::size_t cell(LinkId l, Wavelength w) const {
    return static_cast<std::size_t>(l) * static_cast<std::size_t>(wavelengths_) +
           static_cast<std::size_t>(w - 1);
  }

  // Doubled lower bound on the final wavelength-link cost.
  long long bound2() const {
    long long lb = 2LL * cells_;
    for (std::size_t i = 0; i < demands_.size(); ++i) {
      const auto& d = demands_[i];
      const Choice& c = choice_[i];
      if (c.pair >= 0) {
        if (coding() && c.partner < 0 && remaining_.at(d.destination) > 0)
          lb -= candidates_[i][static_cast<std::size_t>(c.pair)].backup.hops();
        continue;
      }
      bool pairable = coding() && (remaining_.at(d.destination) >= 2 ||
                                   (open_.count(d.destination) && open_.at(d.destination) > 0));
      long long best = std::numeric_limits<long long>::max();
      for (const auto& p : candidates_[i]) {
        long long v = pairable ? 2LL * p.working.hops() + p.backup.hops()
                               : 2LL * (p.working.hops() + p.backup.hops());
        best = std::min(best, v);
      }
      lb += best;
    }
    return lb;
  }

  bool prunable() const {
    if (!best_cost_) return false;
    LexCost lb{max_used_, static_cast<int>((bound2() + 1) / 2)};
    if (options_.objective == Objective::eq1) return lb.link_cost >= best_cost_->link_cost;
    return lb >= *best_cost_;
  }

  bool out_of_budget() {
    if (exhausted_) return true;
    if (nodes_ >= node_budget_) exhausted_ = true;
    if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) exhausted_ = true;
    return exhausted_;
  }

  bool better(const LexCost& c) const {
    if (!best_cost_) return true;
    if (options_.objective == Objective::eq1) return c.link_cost < best_cost_->link_cost;
    return c < *best_cost_;
  }

  // Marks the cells; on conflict undoes and returns false.
  bool take(const std::vector<LinkId>& links, std::size_t count, Wavelength w,
            std::vector<std::size_t>& taken) {
    for (std::size_t k = 0; k < count; ++k) {
      auto c = cell(links[k], w);
      if (grid_[c]) return false;
      grid_[c] = 1;
      taken.push_back(c);
    }
    return true;
  }

  void release(std::vector<std::size_t>& taken) {
    for (auto c : taken) grid_[c] = 0;
    taken.clear();
  }

  void search(std::size_t depth) {
    if (out_of_budget()) return;
    ++nodes_;
    if (prunable()) return;
    if (depth == order_.size()) {
      LexCost c{max_used_, cells_};
      if (better(c)) {
        best_cost_ = c;
        best_ = choice_;
      }
      return;
    }
    const int i = order_[depth];
    const auto ui = static_cast<std::size_t>(i);
    const Demand& d = demands_[ui];
    remaining_[d.destination]--;
    std::vector<std::size_t> taken;
    for (std::size_t p = 0; p < candidates_[ui].size(); ++p) {
      const CandidatePair& pair = candidates_[ui][p];
      if (coding()) {
        for (std::size_t j = 0; j < demands_.size(); ++j) {
          const Choice& cj = choice_[j];
          if (cj.pair < 0 || cj.partner >= 0 || demands_[j].destination != d.destination) continue;
          const CandidatePair& other = candidates_[j][static_cast<std::size_t>(cj.pair)];
          auto suffix = common_backup_suffix(pair.backup, other.backup);
          if (!suffix) continue;
          if (!recovery_disjoint(pair.working, pair.backup, other.working, other.backup)) continue;
          const Wavelength w = cj.wavelength;
          const std::size_t prefix = pair.backup.links().size() - suffix->links().size();
          if (take(pair.working.links(), pair.working.links().size(), w, taken) &&
              take(pair.backup.links(), prefix, w, taken)) {
            const int added = static_cast<int>(taken.size());
            cells_ += added;
            choice_[ui] = {static_cast<int>(p), w, static_cast<int>(j), suffix};
            choice_[j].partner = i;
            choice_[j].suffix = suffix;
            open_[d.destination]--;
            search(depth + 1);
            open_[d.destination]++;
            choice_[j].partner = -1;
            choice_[j].suffix.reset();
            choice_[ui] = {};
            cells_ -= added;
          }
          release(taken);
          if (exhausted_) break;
        }
      }
      const Wavelength first = fresh_only_ ? max_used_ + 1 : 1;
      const Wavelength last = std::min(wavelengths_, max_used_ + 1);
      for (Wavelength w = first; w <= last && !exhausted_; ++w) {
        if (take(pair.working.links(), pair.working.links().size(), w, taken) &&
            take(pair.backup.links(), pair.backup.links().size(), w, taken)) {
          const int added = static_cast<int>(taken.size());
          const int saved_max = max_used_;
          cells_ += added;
          max_used_ = std::max(max_used_, w);
          choice_[ui] = {static_cast<int>(p), w, -1, std::nullopt};
          open_[d.destination]++;
          search(depth + 1);
          open_[d.destination]--;
          choice_[ui] = {};
          max_used_ = saved_max;
          cells_ -= added;
        }
        release(taken);
      }
      if (exhausted_) break;
    }
    remaining_[d.destination]++;
  }

  const Topology& topo_;
  std::vector<Demand> demands_;
  CandidateSet candidates_;
  int wavelengths_;
  ExactOptions options_;
  bool fresh_only_;
  std::int64_t node_budget_;
  std::chrono::steady_clock::time_point deadline_;

  std::vector<std::uint8_t> grid_;
  std::vector<Choice> choice_;
  std::vector<int> order_;
  std::map<NodeId, int> remaining_;  // unassigned demands per destination
  std::map<NodeId, int> open_;       // assigned, uncoded demands per destination
  int cells_ = 0;
  int max_used_ = 0;
  std::int64_t nodes_ = 0;
  bool exhausted_ = false;

  std::optional<LexCost> best_cost_;
  std::vector<Choice> best_;
};

// Reads a heuristic solution back as search choices (for the incumbent).
inline std::optional<std::vector<BranchAndBound::Choice>> choices_from(
    const std::vector<Demand>& demands, const CandidateSet& candidates, const Solution& s) {
  std::vector<BranchAndBound::Choice> out(demands.size());
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < demands.size(); ++i) index[demands[i].id] = i;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const auto* a = s.find(demands[i].id);
    if (!a) return std::nullopt;
    for (std::size_t p = 0; p < candidates[i].size(); ++p)
      if (candidates[i][p].working == a->working && candidates[i][p].backup == a->backup)
        out[i].pair = static_cast<int>(p);
    if (out[i].pair < 0) return std::nullopt;
    out[i].wavelength = a->working_wavelength;
  }
  for (const auto& c : s.codings) {
    auto ia = index.at(c.demand_a), ib = index.at(c.demand_b);
    out[ia].partner = static_cast<int>(ib);
    out[ib].partner = static_cast<int>(ia);
    out[ia].suffix = out[ib].suffix = c.coded_path;
  }
  return out;
}

inline Solution solution_from(const Topology& topo, const std::vector<Demand>& demands,
                              const CandidateSet& candidates,
                              const std::vector<BranchAndBound::Choice>& choices,
                              Wavelength offset = 0) {
  std::vector<ProtectedAssignment> assignments;
  std::vector<CodingAssignment> codings;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const auto& c = choices[i];
    const auto& pair = candidates[i][static_cast<std::size_t>(c.pair)];
    assignments.push_back(
        {demands[i].id, pair.working, c.wavelength + offset, pair.backup, c.wavelength + offset});
    if (c.partner > static_cast<int>(i)) {
      const auto& other = demands[static_cast<std::size_t>(c.partner)];
      codings.push_back({std::min(demands[i].id, other.id), std::max(demands[i].id, other.id),
                         c.suffix->source(), *c.suffix, c.wavelength + offset});
    }
  }
  return make_solution(topo, std::move(assignments), std::move(codings));
}

}  // namespace detail

/// Optimal design over the candidate pairs. Throws Infeasible when no demand
/// assignment fits in |W| (or the budget ran out before any feasible one).
inline ExactResult solve_exact(const Topology& topo, const std::vector<Demand>& demands,
                               const CandidateSet& candidates, const ExactOptions& options = {}) {
  using detail::BranchAndBound;
  if (candidates.size() != demands.size())
    throw ValidationError("candidate set does not match demand list");
  ExactResult result;
  if (demands.empty()) {
    result.solution = make_solution(topo, {}, {});
    result.status = options.full_candidate_space ? ExactStatus::optimal_full
                                                 : ExactStatus::optimal_within_candidates;
    return result;
  }
  for (std::size_t i = 0; i < demands.size(); ++i)
    if (candidates[i].empty()) throw Infeasible("demand " + std::to_string(demands[i].id) +
                                                " has no candidate pair");
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(options.budget.max_seconds));
  bool exhausted = false;

  const bool split = options.decompose && options.objective == Objective::eq1 &&
                     topo.wavelengths() >= static_cast<int>(demands.size());
  if (split) {
    std::map<NodeId, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < demands.size(); ++i) groups[demands[i].destination].push_back(i);
    std::vector<ProtectedAssignment> assignments(demands.size());
    std::vector<CodingAssignment> codings;
    Wavelength offset = 0;
    for (const auto& [dest, members] : groups) {
      std::vector<Demand> sub;
      CandidateSet sub_candidates;
      for (auto i : members) {
        sub.push_back(demands[i]);
        sub_candidates.push_back(candidates[i]);
      }
      BranchAndBound bb(topo, sub, sub_candidates, static_cast<int>(sub.size()), options, true,
                        options.budget.max_nodes - result.nodes, deadline);
      bb.run();
      result.nodes += bb.nodes();
      exhausted = exhausted || bb.exhausted();
      if (!bb.best_cost())
        throw Infeasible("no feasible design for destination " + std::to_string(dest) +
                         (bb.exhausted() ? " within the search budget" : ""));
      Solution part = detail::solution_from(topo, sub, sub_candidates, bb.best(), offset);
      for (std::size_t k = 0; k < members.size(); ++k)
        assignments[members[k]] = part.assignments[k];
      codings.insert(codings.end(), part.codings.begin(), part.codings.end());
      offset += bb.best_cost()->wavelengths;
    }
    result.solution = make_solution(topo, std::move(assignments), std::move(codings));
  } else {
    BranchAndBound bb(topo, demands, candidates, topo.wavelengths(), options, false,
                      options.budget.max_nodes, deadline);
    if (options.warm_start) {
      try {
        Solution h = options.mode == DesignMode::rwa ? solve_rwa(topo, demands, candidates)
                                                     : solve_rwnca(topo, demands, candidates);
        if (auto choices = detail::choices_from(demands, candidates, h))
          bb.seed(lexicographic_cost(h), std::move(*choices));
      } catch (const Blocked&) {
      }
    }
    bb.run();
    result.nodes = bb.nodes();
    exhausted = bb.exhausted();
    if (!bb.best_cost())
      throw Infeasible(exhausted ? "search budget exhausted before any feasible design"
                                 : "no feasible design within " +
                                       std::to_string(topo.wavelengths()) + " wavelengths");
    result.solution = detail::solution_from(topo, demands, candidates, bb.best());
  }
  result.cost = lexicographic_cost(result.solution);
  result.status = exhausted                      ? ExactStatus::budget_exhausted
                  : options.full_candidate_space ? ExactStatus::optimal_full
                                                 : ExactStatus::optimal_within_candidates;
  return result;
}

}  // namespace ocnet
