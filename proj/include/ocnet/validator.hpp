#pragma once

// Independent checker for designs. Works from node lists and the raw
// topology only; nothing here calls into the solvers or their helpers.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocnet/errors.hpp"
#include "ocnet/model.hpp"

namespace ocnet {

struct FamilyInfo {
  std::string_view name;
  std::string_view meaning;
};

// One entry per constraint family of the design model, in model order.
inline constexpr FamilyInfo kCheckFamilies[] = {
    {"served-on-one-wavelength", "every demand is served, on one wavelength"},
    {"flow-conservation", "working and backup are simple source-to-destination paths"},
    {"working-backup-disjoint", "working and backup of a demand share no link"},
    {"wavelength-uniqueness", "each (link, wavelength) carries at most one lightpath"},
    {"coding-node", "at most one coding node per demand, never its destination, on its backup"},
    {"coding-partner", "coded with at most one other demand, of the same destination"},
    {"coding-coherence", "a coded demand has a coding node, coded links and a wavelength"},
    {"recovery-disjoint", "partners' working paths avoid each other's working and backup"},
    {"coding-wavelength", "partners and their coded path share one wavelength"},
    {"coding-node-agreement", "both partners are coded at the same node"},
    {"coded-path-on-backup", "the coded path is the backup tail of both partners"},
    {"coded-path-flow", "the coded path runs from the coding node to the destination"},
    {"objective", "stored occupancy matches a recount from the routes"},
};

struct FamilyResult {
  std::string name;
  std::string meaning;
  std::vector<std::string> offenders;

  bool passed() const { return offenders.empty(); }
};

struct ValidationReport {
  DesignMode mode = DesignMode::rwnca;
  WavelengthMode wavelength_mode = WavelengthMode::strict;
  std::vector<FamilyResult> families;
  int demand_count = 0;
  int coding_count = 0;
  int used_wavelengths = 0;
  int link_cost = 0;

  bool passed() const {
    return std::all_of(families.begin(), families.end(),
                       [](const FamilyResult& f) { return f.passed(); });
  }

  const FamilyResult& family(std::string_view name) const {
    for (const auto& f : families)
      if (f.name == name) return f;
    throw ValidationError("no check family named " + std::string(name));
  }

  std::string text() const {
    std::ostringstream out;
    out << "validation " << (passed() ? "PASS" : "FAIL") << " (mode " << to_string(mode)
        << ", wavelengths " << to_string(wavelength_mode) << ")\n";
    for (const auto& f : families) {
      out << "  [" << (f.passed() ? "pass" : "FAIL") << "] " << f.name << ": " << f.meaning << "\n";
      for (const auto& o : f.offenders) out << "      - " << o << "\n";
    }
    out << "  demands " << demand_count << ", codings " << coding_count << ", used wavelengths "
        << used_wavelengths << ", wavelength-link cost " << link_cost << "\n";
    return out.str();
  }

  std::string records() const {
    std::ostringstream out;
    for (const auto& f : families) {
      out << "family=" << f.name << " status=" << (f.passed() ? "pass" : "fail")
          << " violations=" << f.offenders.size() << "\n";
      for (const auto& o : f.offenders) out << "violation family=" << f.name << " detail=\"" << o
                                            << "\"\n";
    }
    out << "summary status=" << (passed() ? "pass" : "fail") << " mode=" << to_string(mode)
        << " wavelength_mode=" << to_string(wavelength_mode) << " demands=" << demand_count
        << " codings=" << coding_count << " used_wavelengths=" << used_wavelengths
        << " link_cost=" << link_cost << "\n";
    return out.str();
  }
};

namespace validation_detail {

inline std::string join(const std::vector<NodeId>& nodes) {
  std::string s;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += (i ? "-" : "") + std::to_string(nodes[i]);
  return s;
}

inline std::string link_name(const Topology& topo, LinkId l) {
  const Link& k = topo.link(l);
  return std::to_string(k.a) + "-" + std::to_string(k.b);
}

// Link ids along a node walk, or an explanation of why it is not a simple
// path from `from` to `to`.
struct Walk {
  std::vector<LinkId> links;
  std::string problem;
};

inline Walk walk(const Topology& topo, const std::vector<NodeId>& nodes, NodeId from, NodeId to) {
  Walk w;
  if (nodes.size() < 2) {
    w.problem = "fewer than two nodes";
    return w;
  }
  if (nodes.front() != from || nodes.back() != to) {
    w.problem = "runs " + std::to_string(nodes.front()) + "->" + std::to_string(nodes.back()) +
                ", expected " + std::to_string(from) + "->" + std::to_string(to);
    return w;
  }
  std::set<NodeId> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 1 || nodes[i] > topo.node_count()) {
      w.problem = "node " + std::to_string(nodes[i]) + " out of range";
      return w;
    }
    if (!seen.insert(nodes[i]).second) {
      w.problem = "revisits node " + std::to_string(nodes[i]);
      return w;
    }
    if (i == 0) continue;
    auto l = topo.link_between(nodes[i - 1], nodes[i]);
    if (!l) {
      w.problem = "no link " + std::to_string(nodes[i - 1]) + "-" + std::to_string(nodes[i]);
      return w;
    }
    w.links.push_back(*l);
  }
  return w;
}

inline std::vector<LinkId> common(std::vector<LinkId> a, std::vector<LinkId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<LinkId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::string links_text(const Topology& topo, const std::vector<LinkId>& ls) {
  std::string s;
  for (std::size_t i = 0; i < ls.size(); ++i) s += (i ? "," : "") + link_name(topo, ls[i]);
  return s;
}

}  // namespace validation_detail

/// Checks a design against every constraint family. Failures are report
/// content; nothing is thrown for a malformed design.
inline ValidationReport validate(const Topology& topo, const std::vector<Demand>& demands,
                                 const Solution& solution, DesignMode mode = DesignMode::rwnca,
                                 WavelengthMode wavelength_mode = WavelengthMode::strict) {
  namespace vd = validation_detail;
  ValidationReport report;
  report.mode = mode;
  report.wavelength_mode = wavelength_mode;
  report.demand_count = static_cast<int>(demands.size());
  report.coding_count = static_cast<int>(solution.codings.size());
  for (const auto& f : kCheckFamilies)
    report.families.push_back({std::string(f.name), std::string(f.meaning), {}});
  auto flag = [&](std::string_view family, std::string what) {
    for (auto& f : report.families)
      if (f.name == family) f.offenders.push_back(std::move(what));
  };
  const int W = topo.wavelengths();
  auto in_range = [&](Wavelength w) { return w >= 1 && w <= W; };

  std::map<int, const Demand*> demand_by_id;
  for (const auto& d : demands) demand_by_id[d.id] = &d;

  struct Routed {
    const Demand* demand = nullptr;
    const ProtectedAssignment* assignment = nullptr;
    std::vector<LinkId> working, backup;
    bool routes_ok = false;
  };
  std::map<int, Routed> routed;
  std::map<int, int> assignment_count;
  for (const auto& a : solution.assignments) {
    assignment_count[a.demand_id]++;
    auto it = demand_by_id.find(a.demand_id);
    if (it == demand_by_id.end()) {
      flag("served-on-one-wavelength", "assignment for unknown demand " + std::to_string(a.demand_id));
      continue;
    }
    Routed r{it->second, &a, {}, {}, false};
    const Demand& d = *it->second;
    auto tag = "demand " + std::to_string(d.id) + " (" + std::to_string(d.source) + "->" +
               std::to_string(d.destination) + ")";
    auto work = vd::walk(topo, a.working.nodes(), d.source, d.destination);
    auto back = vd::walk(topo, a.backup.nodes(), d.source, d.destination);
    if (!work.problem.empty()) flag("flow-conservation", tag + " working path " + work.problem);
    if (!back.problem.empty()) flag("flow-conservation", tag + " backup path " + back.problem);
    r.routes_ok = work.problem.empty() && back.problem.empty();
    r.working = work.links;
    r.backup = back.links;
    if (!in_range(a.working_wavelength) || !in_range(a.backup_wavelength))
      flag("served-on-one-wavelength", tag + " wavelength outside 1.." + std::to_string(W));
    if (wavelength_mode == WavelengthMode::strict && a.working_wavelength != a.backup_wavelength)
      flag("served-on-one-wavelength", tag + " working on " + std::to_string(a.working_wavelength) +
                                           " but backup on " + std::to_string(a.backup_wavelength));
    if (r.routes_ok) {
      auto shared = vd::common(r.working, r.backup);
      if (!shared.empty())
        flag("working-backup-disjoint", tag + " shares " + vd::links_text(topo, shared));
    }
    routed[d.id] = std::move(r);
  }
  for (const auto& d : demands) {
    int n = assignment_count.count(d.id) ? assignment_count[d.id] : 0;
    if (n == 0) flag("served-on-one-wavelength", "demand " + std::to_string(d.id) + " is not served");
    if (n > 1) flag("served-on-one-wavelength", "demand " + std::to_string(d.id) + " assigned " +
                                                    std::to_string(n) + " times");
  }

  // Per demand: where its backup stops being its own (coding node), if coded
  // with a usable coded path.
  std::map<int, std::size_t> backup_prefix_links;
  std::map<int, int> times_coded;
  struct CodedCells {
    std::string owner;
    std::vector<LinkId> links;
    Wavelength wavelength;
  };
  std::vector<CodedCells> coded_cells;

  for (const auto& c : solution.codings) {
    const std::string tag = "coding " + std::to_string(c.demand_a) + "^" + std::to_string(c.demand_b);
    if (mode == DesignMode::rwa) flag("coding-partner", tag + " present in a design without coding");
    times_coded[c.demand_a]++;
    if (c.demand_b != c.demand_a) times_coded[c.demand_b]++;
    if (c.demand_a == c.demand_b) {
      flag("coding-partner", tag + " pairs a demand with itself");
      continue;
    }
    auto ra = routed.find(c.demand_a), rb = routed.find(c.demand_b);
    if (ra == routed.end() || rb == routed.end()) {
      flag("coding-coherence", tag + " refers to an unserved or unknown demand");
      continue;
    }
    const Demand& da = *ra->second.demand;
    const Demand& db = *rb->second.demand;
    const auto& aa = *ra->second.assignment;
    const auto& ab = *rb->second.assignment;
    if (da.destination != db.destination)
      flag("coding-partner", tag + " destinations differ (" + std::to_string(da.destination) +
                                 " vs " + std::to_string(db.destination) + ")");
    const NodeId v = c.coding_node;
    if (v == da.destination || v == db.destination)
      flag("coding-node", tag + " codes at destination node " + std::to_string(v));
    auto position = [](const Path& p, NodeId n) {
      const auto& ns = p.nodes();
      return static_cast<std::size_t>(std::find(ns.begin(), ns.end(), n) - ns.begin());
    };
    const std::size_t pa = position(aa.backup, v), pb = position(ab.backup, v);
    const bool on_a = pa < aa.backup.nodes().size(), on_b = pb < ab.backup.nodes().size();
    if (!on_a) flag("coding-node", tag + " node " + std::to_string(v) + " not on backup of " +
                                       std::to_string(c.demand_a));
    if (!on_b) flag("coding-node", tag + " node " + std::to_string(v) + " not on backup of " +
                                       std::to_string(c.demand_b));
    if (c.coded_path.nodes().empty() || c.coded_path.nodes().front() != v)
      flag("coding-node-agreement",
           tag + " coded path does not start at the coding node " + std::to_string(v));
    if (!in_range(c.wavelength))
      flag("coding-coherence", tag + " wavelength outside 1.." + std::to_string(W));
    if (c.coded_path.nodes().size() < 2)
      flag("coding-coherence", tag + " has no coded link");

    auto coded = vd::walk(topo, c.coded_path.nodes(), v, da.destination);
    if (!coded.problem.empty()) flag("coded-path-flow", tag + " coded path " + coded.problem);

    bool tail_ok = true;
    for (const auto* r : {&ra->second, &rb->second}) {
      const auto& ns = r->assignment->backup.nodes();
      const std::size_t at = position(r->assignment->backup, v);
      std::vector<NodeId> tail(at < ns.size() ? ns.begin() + static_cast<std::ptrdiff_t>(at)
                                              : ns.end(),
                               ns.end());
      if (tail != c.coded_path.nodes()) {
        tail_ok = false;
        flag("coded-path-on-backup", tag + " coded path " + vd::join(c.coded_path.nodes()) +
                                         " is not the backup tail " + vd::join(ns) + " of demand " +
                                         std::to_string(r->demand->id));
      }
    }

    if (ra->second.routes_ok && rb->second.routes_ok) {
      auto ww = vd::common(ra->second.working, rb->second.working);
      auto wb = vd::common(ra->second.working, rb->second.backup);
      auto bw = vd::common(rb->second.working, ra->second.backup);
      if (!ww.empty()) flag("recovery-disjoint", tag + " working paths share " + vd::links_text(topo, ww));
      if (!wb.empty())
        flag("recovery-disjoint", tag + " working of " + std::to_string(c.demand_a) +
                                      " meets backup of " + std::to_string(c.demand_b) + " on " +
                                      vd::links_text(topo, wb));
      if (!bw.empty())
        flag("recovery-disjoint", tag + " working of " + std::to_string(c.demand_b) +
                                      " meets backup of " + std::to_string(c.demand_a) + " on " +
                                      vd::links_text(topo, bw));
    }

    if (wavelength_mode == WavelengthMode::strict) {
      if (aa.working_wavelength != ab.working_wavelength)
        flag("coding-wavelength", tag + " partners on wavelengths " +
                                      std::to_string(aa.working_wavelength) + " and " +
                                      std::to_string(ab.working_wavelength));
      if (c.wavelength != aa.backup_wavelength || c.wavelength != ab.backup_wavelength)
        flag("coding-wavelength", tag + " coded path on " + std::to_string(c.wavelength) +
                                      ", backups on " + std::to_string(aa.backup_wavelength) +
                                      " and " + std::to_string(ab.backup_wavelength));
    }

    if (tail_ok && coded.problem.empty() && on_a && on_b) {
      backup_prefix_links[c.demand_a] = pa;
      backup_prefix_links[c.demand_b] = pb;
      coded_cells.push_back({tag, coded.links, c.wavelength});
    }
  }
  for (const auto& [id, n] : times_coded)
    if (n > 1) flag("coding-partner", "demand " + std::to_string(id) + " coded " +
                                          std::to_string(n) + " times");

  // Recount occupancy from scratch.
  std::map<std::pair<LinkId, Wavelength>, std::vector<std::string>> owners;
  for (const auto& [id, r] : routed) {
    const std::string d = "demand " + std::to_string(id);
    for (LinkId l : r.working) owners[{l, r.assignment->working_wavelength}].push_back(d + " working");
    std::size_t keep = r.backup.size();
    if (auto it = backup_prefix_links.find(id); it != backup_prefix_links.end())
      keep = std::min(keep, it->second);
    for (std::size_t i = 0; i < keep; ++i)
      owners[{r.backup[i], r.assignment->backup_wavelength}].push_back(d + " backup");
  }
  for (const auto& cc : coded_cells)
    for (LinkId l : cc.links) owners[{l, cc.wavelength}].push_back(cc.owner);
  std::set<Wavelength> used;
  for (const auto& [cell, who] : owners) {
    used.insert(cell.second);
    if (who.size() > 1) {
      std::string s = "link " + vd::link_name(topo, cell.first) + " wavelength " +
                      std::to_string(cell.second) + ":";
      for (std::size_t i = 0; i < who.size(); ++i) s += (i ? ", " : " ") + who[i];
      flag("wavelength-uniqueness", s);
    }
  }
  report.link_cost = static_cast<int>(owners.size());
  report.used_wavelengths = static_cast<int>(used.size());

  const Occupancy& stored = solution.occupancy;
  if (!stored.populated()) {
    // nothing stored to compare (designs read from text that do not derive)
  } else if (stored.links() != topo.link_count() || stored.wavelengths() != W) {
    flag("objective", "stored occupancy has the wrong shape");
  } else {
    for (LinkId l = 0; l < topo.link_count(); ++l)
      for (Wavelength w = 1; w <= W; ++w)
        if (stored.used(l, w) != (owners.count({l, w}) > 0))
          flag("objective", "cell link " + vd::link_name(topo, l) + " wavelength " +
                                std::to_string(w) + " stored as " +
                                (stored.used(l, w) ? "used" : "free"));
  }
  return report;
}

enum class RecoveryVerdict { unaffected, recovered_via_backup, recovered_via_coding, lost };

inline const char* to_string(RecoveryVerdict v) {
  switch (v) {
    case RecoveryVerdict::unaffected: return "unaffected";
    case RecoveryVerdict::recovered_via_backup: return "recovered-via-backup";
    case RecoveryVerdict::recovered_via_coding: return "recovered-via-coding";
    case RecoveryVerdict::lost: return "lost";
  }
  return "?";
}

struct DemandRecovery {
  int demand_id = 0;
  RecoveryVerdict verdict = RecoveryVerdict::unaffected;
};

/// Outcome for every demand when failed_link goes down. A coded demand b is
/// rebuilt as (a xor b) xor a, which needs both backup prefixes into the
/// coding node, the coded tail, and a's live working signal.
inline std::vector<DemandRecovery> simulate_failure_recovery(const Topology& topo,
                                                             const std::vector<Demand>& demands,
                                                             const Solution& solution,
                                                             LinkId failed_link) {
  const Link& failed = topo.link(failed_link);  // throws UnknownLink
  auto crosses = [&](const std::vector<NodeId>& nodes, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i + 1 < std::min(to, nodes.size()); ++i) {
      NodeId u = nodes[i], v = nodes[i + 1];
      if ((u == failed.a && v == failed.b) || (u == failed.b && v == failed.a)) return true;
    }
    return false;
  };
  auto whole = [&](const Path& p) { return crosses(p.nodes(), 0, p.nodes().size()); };
  auto index = [](const Path& p, NodeId n) {
    const auto& ns = p.nodes();
    return static_cast<std::size_t>(std::find(ns.begin(), ns.end(), n) - ns.begin());
  };

  std::vector<DemandRecovery> out;
  for (const auto& d : demands) {
    DemandRecovery r{d.id, RecoveryVerdict::unaffected};
    const ProtectedAssignment* a = nullptr;
    for (const auto& x : solution.assignments)
      if (x.demand_id == d.id) a = &x;
    if (!a) {
      r.verdict = RecoveryVerdict::lost;
      out.push_back(r);
      continue;
    }
    if (whole(a->working)) {
      const CodingAssignment* c = nullptr;
      for (const auto& x : solution.codings)
        if (x.demand_a == d.id || x.demand_b == d.id) c = &x;
      if (!c) {
        r.verdict = whole(a->backup) ? RecoveryVerdict::lost : RecoveryVerdict::recovered_via_backup;
      } else {
        const int partner_id = c->demand_a == d.id ? c->demand_b : c->demand_a;
        const ProtectedAssignment* p = nullptr;
        for (const auto& x : solution.assignments)
          if (x.demand_id == partner_id) p = &x;
        bool ok = p != nullptr;
        if (ok) {
          ok = !crosses(a->backup.nodes(), 0, index(a->backup, c->coding_node) + 1) &&
               !crosses(p->backup.nodes(), 0, index(p->backup, c->coding_node) + 1) &&
               !whole(c->coded_path) && !whole(p->working);
        }
        r.verdict = ok ? RecoveryVerdict::recovered_via_coding : RecoveryVerdict::lost;
      }
    }
    out.push_back(r);
  }
  return out;
}

/// True iff no single link failure loses any demand.
inline bool audit_exhaustive(const Topology& topo, const std::vector<Demand>& demands,
                             const Solution& solution) {
  for (LinkId l = 0; l < topo.link_count(); ++l)
    for (const auto& r : simulate_failure_recovery(topo, demands, solution, l))
      if (r.verdict == RecoveryVerdict::lost) return false;
  return true;
}

}  // namespace ocnet
