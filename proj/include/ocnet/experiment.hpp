#pragma once

// Experiment drivers: bypass vs coding comparison over generated traffic,
// replay of the two-source worked example, and exact-vs-heuristic gaps.
// Instances run on a small thread pool; each result lands in its own slot so
// output order never depends on scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ocnet/exact.hpp"
#include "ocnet/model.hpp"
#include "ocnet/nc_heuristic.hpp"
#include "ocnet/pathing.hpp"
#include "ocnet/rwa.hpp"
#include "ocnet/solution_io.hpp"
#include "ocnet/topology_io.hpp"
#include "ocnet/validator.hpp"
#include "ocnet/worked_example.hpp"

namespace ocnet {

/// Runs task(i) for i in [0, count) on up to `threads` workers. The first
/// exception by index is rethrown after all workers stop.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Relative gain (wnc - nc) / wnc; 0 when wnc is 0.
inline double relative_gain(double wnc, double nc) { return wnc > 0 ? (wnc - nc) / wnc : 0.0; }

inline int whole_percent(double fraction) { return static_cast<int>(std::lround(fraction * 100.0)); }

inline bool is_full_mesh(double load) { return load >= 1.0; }

inline std::string format_load(double load) {
  std::ostringstream s;
  s << load;
  return s.str();
}

/// Traffic for one instance; full mesh ignores seed and index.
inline std::vector<Demand> instance_demands(int nodes, double load, std::uint64_t seed, int index) {
  return generate_traffic(nodes, load, seed, static_cast<std::uint64_t>(index)).demands();
}

// ---------------------------------------------------------------------------
// Comparison

struct InstanceComparison {
  double load = 0;
  int instance = 0;
  int demands = 0;
  int wnc_cost = 0;
  int nc_cost = 0;
  int coding_ops = 0;
  int wnc_wavelengths = 0;
  int nc_wavelengths = 0;
  double gain() const { return relative_gain(wnc_cost, nc_cost); }
};

struct LoadSummary {
  double load = 0;
  int instances = 0;
  double mean_wnc = 0;
  double mean_nc = 0;
  double max_gain = 0;
  double mean_gain = 0;
  double mean_coding_ops = 0;
};

struct ComparisonResult {
  ScenarioSpec scenario;
  std::vector<InstanceComparison> instances;  // load-major, then instance index
  std::vector<LoadSummary> loads;
};

inline LoadSummary summarize(double load, const std::vector<InstanceComparison>& rows) {
  LoadSummary s{load, 0, 0, 0, 0, 0, 0};
  for (const auto& r : rows) {
    if (r.load != load) continue;
    s.instances++;
    s.mean_wnc += r.wnc_cost;
    s.mean_nc += r.nc_cost;
    s.mean_coding_ops += r.coding_ops;
    s.mean_gain += r.gain();
    s.max_gain = std::max(s.max_gain, r.gain());
  }
  if (s.instances) {
    s.mean_wnc /= s.instances;
    s.mean_nc /= s.instances;
    s.mean_coding_ops /= s.instances;
    s.mean_gain /= s.instances;
  }
  return s;
}

/// Bypass baseline and coding heuristic on the same candidate pairs for
/// every instance. A blocked instance aborts the run with a Blocked error
/// naming the instance and demand.
inline ComparisonResult run_comparison(const ScenarioSpec& scenario, unsigned threads = 0) {
  const Topology topo = builtin_topology(scenario.topology, scenario.wavelengths);
  ComparisonResult result{scenario, {}, {}};
  for (double load : scenario.loads) {
    const int count = is_full_mesh(load) ? 1 : scenario.instances;
    for (int i = 0; i < count; ++i) result.instances.push_back({load, i, 0, 0, 0, 0, 0, 0});
  }
  parallel_for(result.instances.size(), threads, [&](std::size_t slot) {
    auto& row = result.instances[slot];
    const auto demands = instance_demands(topo.node_count(), row.load, scenario.seed, row.instance);
    row.demands = static_cast<int>(demands.size());
    const auto candidates = build_candidates(topo, demands, scenario.k_pairs);
    try {
      const Solution wnc = solve_rwa(topo, demands, candidates);
      const Solution nc = solve_rwnca(topo, demands, candidates);
      row.wnc_cost = wavelength_link_cost(wnc);
      row.nc_cost = wavelength_link_cost(nc);
      row.coding_ops = static_cast<int>(nc.codings.size());
      row.wnc_wavelengths = wnc.occupancy.used_wavelength_count();
      row.nc_wavelengths = nc.occupancy.used_wavelength_count();
    } catch (const Blocked& b) {
      throw Blocked(b.demand_id(), "instance " + std::to_string(row.instance) + " at load " +
                                       format_load(row.load) + ": " + b.what());
    }
  });
  for (double load : scenario.loads) result.loads.push_back(summarize(load, result.instances));
  return result;
}

inline std::string comparison_table(const ComparisonResult& r) {
  std::ostringstream out;
  out << r.scenario.topology << ", seed " << r.scenario.seed << ", " << r.scenario.wavelengths
      << " wavelengths, " << r.scenario.k_pairs << " candidate pairs\n";
  out << std::left << std::setw(6) << "Load" << std::right << std::setw(10) << "w-NC"
      << std::setw(10) << "NC" << "  " << std::left << std::setw(26) << "Relative Gain" << std::right
      << std::setw(14) << "Coding ops" << std::setw(11) << "Instances" << "\n";
  for (const auto& s : r.loads) {
    std::ostringstream gain;
    if (whole_percent(s.max_gain) == whole_percent(s.mean_gain))
      gain << "Max = Mean = " << whole_percent(s.mean_gain) << "%";
    else
      gain << "Max = " << whole_percent(s.max_gain) << "%, Mean = " << whole_percent(s.mean_gain)
           << "%";
    out << std::left << std::setw(6) << (std::to_string(whole_percent(s.load)) + "%") << std::right
        << std::fixed << std::setprecision(1) << std::setw(10) << s.mean_wnc << std::setw(10)
        << s.mean_nc << "  " << std::left << std::setw(26) << gain.str() << std::right
        << std::setw(14) << s.mean_coding_ops << std::setw(11) << s.instances << "\n";
  }
  return out.str();
}

inline std::string comparison_csv(const ComparisonResult& r) {
  std::ostringstream out;
  out << "topology,load,instance,demands,wnc_cost,nc_cost,gain,coding_ops,wnc_wavelengths,"
         "nc_wavelengths\n";
  for (const auto& i : r.instances) {
    char gain[32];
    std::snprintf(gain, sizeof gain, "%.6f", i.gain());
    out << r.scenario.topology << "," << format_load(i.load) << "," << i.instance << ","
        << i.demands << "," << i.wnc_cost << "," << i.nc_cost << "," << gain << ","
        << i.coding_ops << "," << i.wnc_wavelengths << "," << i.nc_wavelengths << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Worked example

struct ReplayReport {
  ValidationReport validation;
  bool recovery_audit = false;
  std::vector<CodingAssignment> codings;
  std::vector<Demand> demands;
  bool demands_match_traffic = false;

  bool passed() const {
    return validation.passed() && recovery_audit && demands_match_traffic &&
           validation.coding_count == worked_example::kExpectedCodings &&
           validation.used_wavelengths == worked_example::kExpectedWavelengths;
  }
};

/// Loads the two-source traffic and design (or an override design text),
/// validates it in `mode` and audits single-link recovery.
inline ReplayReport replay_worked_example(std::optional<std::string_view> solution_text = std::nullopt,
                                          WavelengthMode mode = WavelengthMode::lenient) {
  const Topology topo = builtin_topology(std::string(worked_example::kTopology));
  const auto traffic = parse_traffic(worked_example::kTraffic);
  const auto demands = traffic.demands();
  const auto design = parse_solution(topo, solution_text.value_or(worked_example::kSolution));
  ReplayReport r;
  r.demands = demands;
  r.demands_match_traffic = design.demands.size() == demands.size() &&
                            std::equal(demands.begin(), demands.end(), design.demands.begin(),
                                       [](const Demand& x, const Demand& y) {
                                         return x.id == y.id && x.source == y.source &&
                                                x.destination == y.destination;
                                       });
  r.validation = validate(topo, demands, design.solution, DesignMode::rwnca, mode);
  r.recovery_audit = audit_exhaustive(topo, demands, design.solution);
  r.codings = design.solution.codings;
  return r;
}

inline std::string replay_text(const ReplayReport& r) {
  std::ostringstream out;
  out << "worked example: " << (r.passed() ? "PASS" : "FAIL") << "\n";
  out << "demands " << r.demands.size() << (r.demands_match_traffic ? "" : " (design/traffic mismatch)")
      << ", codings " << r.validation.coding_count << ", used wavelengths "
      << r.validation.used_wavelengths << ", wavelength-link cost " << r.validation.link_cost
      << ", recovery audit " << (r.recovery_audit ? "pass" : "FAIL") << "\n";
  auto name = [&](int id) {
    for (const auto& d : r.demands)
      if (d.id == id) return "(" + std::to_string(d.source) + "->" + std::to_string(d.destination) + ")";
    return std::string("(?)");
  };
  out << "coded lightpaths:\n";
  for (const auto& c : r.codings)
    out << "  " << name(c.demand_a) << " xor " << name(c.demand_b) << "  node " << c.coding_node
        << "  route " << c.coded_path.to_string() << "  wavelength " << c.wavelength << "\n";
  out << r.validation.text();
  return out.str();
}

inline std::string replay_csv(const ReplayReport& r) {
  std::ostringstream out;
  out << "check,status,violations\n";
  for (const auto& f : r.validation.families)
    out << f.name << "," << (f.passed() ? "pass" : "fail") << "," << f.offenders.size() << "\n";
  out << "recovery_audit," << (r.recovery_audit ? "pass" : "fail") << ",0\n";
  out << "codings," << r.validation.coding_count << ",\n";
  out << "used_wavelengths," << r.validation.used_wavelengths << ",\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Exact vs heuristic

struct GapRow {
  double load = 0;
  int instance = 0;
  int demands = 0;
  LexCost heuristic;
  LexCost exact;
  ExactStatus status = ExactStatus::optimal_within_candidates;
  std::int64_t nodes = 0;
  bool infeasible = false;
};

struct GapResult {
  ScenarioSpec scenario;
  Objective objective = Objective::eq1;
  DesignMode mode = DesignMode::rwnca;
  bool full_candidates = false;
  std::vector<GapRow> rows;
};

/// Scalar score under the objective (scaled weighted form for the
/// wavelength-first objective).
inline long long score(const LexCost& c, Objective o, const Topology& topo) {
  return o == Objective::eq1 ? c.link_cost
                             : weighted_objective_scaled(c, topo.link_count(), topo.wavelengths());
}

struct GapOptions {
  Objective objective = Objective::eq1;
  DesignMode mode = DesignMode::rwnca;
  ExactBudget budget;
  std::optional<bool> full_candidates;  // default: full when the topology has <= 8 nodes
  unsigned threads = 0;
};

inline GapResult run_exact_vs_heuristic(const ScenarioSpec& scenario, const GapOptions& options = {}) {
  const Topology topo = builtin_topology(scenario.topology, scenario.wavelengths);
  GapResult result{scenario, options.objective, options.mode,
                   options.full_candidates.value_or(topo.node_count() <= 8), {}};
  for (double load : scenario.loads) {
    const int count = is_full_mesh(load) ? 1 : scenario.instances;
    for (int i = 0; i < count; ++i) {
      GapRow row;
      row.load = load;
      row.instance = i;
      result.rows.push_back(row);
    }
  }
  parallel_for(result.rows.size(), options.threads, [&](std::size_t slot) {
    auto& row = result.rows[slot];
    const auto demands = instance_demands(topo.node_count(), row.load, scenario.seed, row.instance);
    row.demands = static_cast<int>(demands.size());
    const auto heuristic_candidates = build_candidates(topo, demands, scenario.k_pairs);
    const Solution h = options.mode == DesignMode::rwa
                           ? solve_rwa(topo, demands, heuristic_candidates)
                           : solve_rwnca(topo, demands, heuristic_candidates);
    row.heuristic = lexicographic_cost(h);
    const auto candidates = result.full_candidates ? build_full_candidates(topo, demands)
                                                   : heuristic_candidates;
    ExactOptions eo;
    eo.objective = options.objective;
    eo.mode = options.mode;
    eo.budget = options.budget;
    eo.full_candidate_space = result.full_candidates;
    try {
      auto e = solve_exact(topo, demands, candidates, eo);
      row.exact = e.cost;
      row.status = e.status;
      row.nodes = e.nodes;
    } catch (const Infeasible&) {
      row.infeasible = true;
    }
  });
  return result;
}

inline std::string gap_table(const GapResult& r, const Topology& topo) {
  std::ostringstream out;
  out << r.scenario.topology << ", seed " << r.scenario.seed << ", objective "
      << to_string(r.objective) << ", mode " << to_string(r.mode) << ", "
      << (r.full_candidates ? "all disjoint pairs" : "ranked candidate pairs") << "\n";
  out << std::left << std::setw(6) << "Load" << std::right << std::setw(10) << "Exact"
      << std::setw(11) << "Heuristic" << std::setw(10) << "Mean gap" << std::setw(9) << "Max gap"
      << std::setw(8) << "Equal" << std::setw(11) << "Instances" << std::setw(12) << "Unproven"
      << "\n";
  std::vector<double> loads;
  for (const auto& row : r.rows)
    if (std::find(loads.begin(), loads.end(), row.load) == loads.end()) loads.push_back(row.load);
  for (double load : loads) {
    double exact = 0, heur = 0, gap = 0, max_gap = 0;
    int n = 0, equal = 0, unproven = 0;
    for (const auto& row : r.rows) {
      if (row.load != load || row.infeasible) continue;
      const double e = static_cast<double>(score(row.exact, r.objective, topo));
      const double h = static_cast<double>(score(row.heuristic, r.objective, topo));
      exact += e;
      heur += h;
      gap += h - e;
      max_gap = std::max(max_gap, h - e);
      equal += h == e;
      unproven += row.status == ExactStatus::budget_exhausted;
      ++n;
    }
    if (n) exact /= n, heur /= n, gap /= n;
    out << std::left << std::setw(6) << (std::to_string(whole_percent(load)) + "%") << std::right
        << std::fixed << std::setprecision(1) << std::setw(10) << exact << std::setw(11) << heur
        << std::setw(10) << gap << std::setw(9) << max_gap << std::setw(8) << equal << std::setw(11)
        << n << std::setw(12) << unproven << "\n";
  }
  return out.str();
}

inline std::string gap_csv(const GapResult& r) {
  std::ostringstream out;
  out << "topology,load,instance,demands,objective,mode,heuristic_wavelengths,heuristic_cost,"
         "exact_wavelengths,exact_cost,status,search_nodes\n";
  for (const auto& row : r.rows) {
    out << r.scenario.topology << "," << format_load(row.load) << "," << row.instance << ","
        << row.demands << "," << to_string(r.objective) << "," << to_string(r.mode) << ","
        << row.heuristic.wavelengths << "," << row.heuristic.link_cost << ",";
    if (row.infeasible)
      out << ",,infeasible,";
    else
      out << row.exact.wavelengths << "," << row.exact.link_cost << "," << to_string(row.status)
          << "," << row.nodes;
    out << "\n";
  }
  return out.str();
}

}  // namespace ocnet
