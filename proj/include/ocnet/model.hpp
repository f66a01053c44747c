#pragma once

// Domain types shared by every module: topology, demands, paths, protected and
// coded assignments, and the (link, wavelength) occupancy grid that defines the
// wavelength-link cost.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "ocnet/errors.hpp"

namespace ocnet {

using NodeId = int;      // 1-based
using LinkId = int;      // 0-based index into Topology::links()
using Wavelength = int;  // 1-based

struct Link {
  LinkId id = -1;
  NodeId a = 0;
  NodeId b = 0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
  bool touches(NodeId n) const { return n == a || n == b; }
};

/// Undirected simple graph with a uniform wavelength count per fiber link.
class Topology {
 public:
  struct Adjacent {
    NodeId node;
    LinkId link;
  };

  Topology() = default;

  /// Builds and validates: ids in [1, node_count], no self-loops, no parallel
  /// links, connected, wavelengths >= 1. Throws ValidationError.
  Topology(int node_count, int wavelengths, const std::vector<std::pair<NodeId, NodeId>>& edges,
           std::string name = {})
      : name_(std::move(name)), node_count_(node_count), wavelengths_(wavelengths) {
    if (node_count < 2) throw ValidationError("topology needs at least 2 nodes");
    if (wavelengths < 1) throw ValidationError("wavelength count must be >= 1");
    adjacency_.assign(static_cast<std::size_t>(node_count) + 1, {});
    for (auto [u, v] : edges) {
      if (u < 1 || u > node_count || v < 1 || v > node_count)
        throw ValidationError("link " + std::to_string(u) + "-" + std::to_string(v) +
                              " references a node outside 1.." + std::to_string(node_count));
      if (u == v) throw ValidationError("self-loop at node " + std::to_string(u));
      if (link_between(u, v))
        throw ValidationError("parallel link " + std::to_string(u) + "-" + std::to_string(v));
      LinkId id = static_cast<LinkId>(links_.size());
      links_.push_back({id, std::min(u, v), std::max(u, v)});
      adjacency_[u].push_back({v, id});
      adjacency_[v].push_back({u, id});
    }
    for (auto& adj : adjacency_)
      std::sort(adj.begin(), adj.end(),
                [](const Adjacent& x, const Adjacent& y) { return x.node < y.node; });
    if (!connected()) throw ValidationError("topology is not connected");
  }

  const std::string& name() const { return name_; }
  int node_count() const { return node_count_; }
  int link_count() const { return static_cast<int>(links_.size()); }
  int wavelengths() const { return wavelengths_; }
  const std::vector<Link>& links() const { return links_; }

  const Link& link(LinkId id) const {
    if (id < 0 || id >= link_count()) throw UnknownLink(id);
    return links_[static_cast<std::size_t>(id)];
  }

  bool contains(NodeId n) const { return n >= 1 && n <= node_count_; }

  /// Neighbours of n in ascending node order.
  const std::vector<Adjacent>& neighbors(NodeId n) const {
    return adjacency_.at(static_cast<std::size_t>(n));
  }

  int degree(NodeId n) const { return static_cast<int>(neighbors(n).size()); }

  std::optional<LinkId> link_between(NodeId u, NodeId v) const {
    if (!contains(u) || !contains(v)) return std::nullopt;
    for (const auto& adj : adjacency_[static_cast<std::size_t>(u)])
      if (adj.node == v) return adj.link;
    return std::nullopt;
  }

  Topology with_wavelengths(int wavelengths) const {
    if (wavelengths < 1) throw ValidationError("wavelength count must be >= 1");
    Topology t = *this;
    t.wavelengths_ = wavelengths;
    return t;
  }

 private:
  bool connected() const {
    std::vector<char> seen(static_cast<std::size_t>(node_count_) + 1, 0);
    std::queue<NodeId> todo;
    todo.push(1);
    seen[1] = 1;
    int reached = 1;
    while (!todo.empty()) {
      NodeId n = todo.front();
      todo.pop();
      for (const auto& adj : adjacency_[static_cast<std::size_t>(n)]) {
        if (!seen[static_cast<std::size_t>(adj.node)]) {
          seen[static_cast<std::size_t>(adj.node)] = 1;
          ++reached;
          todo.push(adj.node);
        }
      }
    }
    return reached == node_count_;
  }

  std::string name_;
  int node_count_ = 0;
  int wavelengths_ = 1;
  std::vector<Link> links_;
  std::vector<std::vector<Adjacent>> adjacency_;
};

/// Unit-capacity connection request; one wavelength end to end.
struct Demand {
  int id = 0;
  NodeId source = 0;
  NodeId destination = 0;

  friend bool operator==(const Demand&, const Demand&) = default;
};

/// Node sequence plus the links between consecutive nodes. Construction only
/// checks adjacency; simplicity and endpoints are the validator's business.
class Path {
 public:
  Path() = default;

  static Path from_nodes(const Topology& topo, std::vector<NodeId> nodes) {
    if (nodes.empty()) throw ValidationError("empty path");
    Path p;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!topo.contains(nodes[i]))
        throw ValidationError("path node " + std::to_string(nodes[i]) + " is not in the topology");
      if (i == 0) continue;
      auto link = topo.link_between(nodes[i - 1], nodes[i]);
      if (!link)
        throw ValidationError("path step " + std::to_string(nodes[i - 1]) + "-" +
                              std::to_string(nodes[i]) + " is not a link");
      p.links_.push_back(*link);
    }
    p.nodes_ = std::move(nodes);
    return p;
  }

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<LinkId>& links() const { return links_; }
  bool empty() const { return nodes_.empty(); }
  int hops() const { return static_cast<int>(links_.size()); }
  NodeId source() const { return nodes_.front(); }
  NodeId destination() const { return nodes_.back(); }

  bool uses(LinkId l) const { return std::find(links_.begin(), links_.end(), l) != links_.end(); }
  bool visits(NodeId n) const { return std::find(nodes_.begin(), nodes_.end(), n) != nodes_.end(); }

  bool shares_link_with(const Path& other) const {
    for (LinkId l : links_)
      if (other.uses(l)) return true;
    return false;
  }

  bool is_simple() const {
    std::vector<NodeId> sorted = nodes_;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }

  /// The tail of this path starting at node n, or nullopt if n is not on it.
  std::optional<Path> suffix_from(NodeId n) const {
    auto it = std::find(nodes_.begin(), nodes_.end(), n);
    if (it == nodes_.end()) return std::nullopt;
    auto idx = static_cast<std::size_t>(it - nodes_.begin());
    Path p;
    p.nodes_.assign(nodes_.begin() + static_cast<std::ptrdiff_t>(idx), nodes_.end());
    p.links_.assign(links_.begin() + static_cast<std::ptrdiff_t>(idx), links_.end());
    return p;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (i) s += '-';
      s += std::to_string(nodes_[i]);
    }
    return s;
  }

  friend bool operator==(const Path& x, const Path& y) { return x.nodes_ == y.nodes_; }
  friend auto operator<=>(const Path& x, const Path& y) { return x.nodes_ <=> y.nodes_; }

 private:
  std::vector<NodeId> nodes_;
  std::vector<LinkId> links_;
};

/// Hop count first, then node sequence.
inline bool shorter_path(const Path& x, const Path& y) {
  if (x.hops() != y.hops()) return x.hops() < y.hops();
  return x.nodes() < y.nodes();
}

/// Working path and dedicated link-disjoint backup, each with its wavelength.
struct ProtectedAssignment {
  int demand_id = 0;
  Path working;
  Wavelength working_wavelength = 1;
  Path backup;
  Wavelength backup_wavelength = 1;
};

/// Two backup lightpaths XOR-combined at coding_node; the coded lightpath runs
/// from coding_node to the shared destination on a single wavelength.
struct CodingAssignment {
  int demand_a = 0;
  int demand_b = 0;
  NodeId coding_node = 0;
  Path coded_path;
  Wavelength wavelength = 1;

  bool involves(int demand_id) const { return demand_a == demand_id || demand_b == demand_id; }
  int partner_of(int demand_id) const { return demand_id == demand_a ? demand_b : demand_a; }
};

/// strict: one wavelength per demand for working, backup and coded path.
/// lenient: working and backup wavelengths may differ and the coded path may
/// change wavelength at the coding node.
enum class WavelengthMode { strict, lenient };

inline const char* to_string(WavelengthMode m) {
  return m == WavelengthMode::strict ? "strict" : "lenient";
}

/// Which objective a design is scored by. eq1: wavelength-link cost.
/// eq21: used wavelengths first, wavelength-link cost second.
enum class Objective { eq1, eq21 };

/// rwa: no coding. rwnca: backup pairs may be XOR-coded.
enum class DesignMode { rwa, rwnca };

inline const char* to_string(Objective o) { return o == Objective::eq1 ? "eq1" : "eq21"; }
inline const char* to_string(DesignMode m) { return m == DesignMode::rwa ? "rwa" : "rwnca"; }

/// Boolean grid over (link, wavelength).
class Occupancy {
 public:
  Occupancy() = default;
  Occupancy(int links, int wavelengths)
      : links_(links),
        wavelengths_(wavelengths),
        cells_(static_cast<std::size_t>(links) * static_cast<std::size_t>(wavelengths), 0) {}

  int links() const { return links_; }
  int wavelengths() const { return wavelengths_; }
  bool populated() const { return !cells_.empty(); }

  bool used(LinkId l, Wavelength w) const { return cells_[index(l, w)] != 0; }
  void set(LinkId l, Wavelength w, bool on = true) { cells_[index(l, w)] = on ? 1 : 0; }

  bool all_free(const std::vector<LinkId>& links, Wavelength w) const {
    return std::none_of(links.begin(), links.end(), [&](LinkId l) { return used(l, w); });
  }

  /// Total occupied (link, wavelength) cells.
  int cost() const {
    return static_cast<int>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
  }

  /// Index w-1 is true iff wavelength w is lit on some link.
  std::vector<bool> used_wavelengths() const {
    std::vector<bool> out(static_cast<std::size_t>(wavelengths_), false);
    for (LinkId l = 0; l < links_; ++l)
      for (Wavelength w = 1; w <= wavelengths_; ++w)
        if (used(l, w)) out[static_cast<std::size_t>(w - 1)] = true;
    return out;
  }

  int used_wavelength_count() const {
    auto u = used_wavelengths();
    return static_cast<int>(std::count(u.begin(), u.end(), true));
  }

  friend bool operator==(const Occupancy&, const Occupancy&) = default;

 private:
  std::size_t index(LinkId l, Wavelength w) const {
    if (l < 0 || l >= links_) throw UnknownLink(l);
    if (w < 1 || w > wavelengths_)
      throw ValidationError("wavelength " + std::to_string(w) + " outside 1.." +
                            std::to_string(wavelengths_));
    return static_cast<std::size_t>(l) * static_cast<std::size_t>(wavelengths_) +
           static_cast<std::size_t>(w - 1);
  }

  int links_ = 0;
  int wavelengths_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct Solution {
  std::vector<ProtectedAssignment> assignments;
  std::vector<CodingAssignment> codings;
  WavelengthMode wavelength_mode = WavelengthMode::strict;
  Occupancy occupancy;

  const ProtectedAssignment* find(int demand_id) const {
    for (const auto& a : assignments)
      if (a.demand_id == demand_id) return &a;
    return nullptr;
  }
  ProtectedAssignment* find(int demand_id) {
    for (auto& a : assignments)
      if (a.demand_id == demand_id) return &a;
    return nullptr;
  }
  const CodingAssignment* coding_of(int demand_id) const {
    for (const auto& c : codings)
      if (c.involves(demand_id)) return &c;
    return nullptr;
  }
};

namespace detail {

inline std::string cell_name(const Topology& topo, LinkId l, Wavelength w) {
  const Link& link = topo.link(l);
  return "(" + std::to_string(link.a) + "-" + std::to_string(link.b) + ", w" + std::to_string(w) +
         ")";
}

}  // namespace detail

/// Builds the (link, wavelength) grid from the lightpaths. A coded pair's
/// shared suffix is counted once on the coding wavelength; the backup prefix
/// upstream of the coding node stays on the backup wavelength. Any other double
/// claim of a cell throws CollisionError. The result is independent of the
/// order of assignments and codings.
inline Occupancy derive_occupancy(const Topology& topo,
                                  const std::vector<ProtectedAssignment>& assignments,
                                  const std::vector<CodingAssignment>& codings) {
  Occupancy grid(topo.link_count(), topo.wavelengths());
  std::vector<std::string> owner(static_cast<std::size_t>(topo.link_count()) *
                                 static_cast<std::size_t>(topo.wavelengths()));
  auto claim = [&](LinkId l, Wavelength w, const std::string& who) {
    if (w < 1 || w > topo.wavelengths())
      throw ValidationError(who + " uses wavelength " + std::to_string(w) + " outside 1.." +
                            std::to_string(topo.wavelengths()));
    auto idx = static_cast<std::size_t>(l) * static_cast<std::size_t>(topo.wavelengths()) +
               static_cast<std::size_t>(w - 1);
    if (grid.used(l, w))
      throw CollisionError(detail::cell_name(topo, l, w) + " claimed by both " + owner[idx] +
                           " and " + who);
    grid.set(l, w);
    owner[idx] = who;
  };

  auto coding_for = [&](int demand_id) -> const CodingAssignment* {
    const CodingAssignment* found = nullptr;
    for (const auto& c : codings) {
      if (!c.involves(demand_id)) continue;
      if (found)
        throw ValidationError("demand " + std::to_string(demand_id) + " is coded more than once");
      found = &c;
    }
    return found;
  };

  for (const auto& a : assignments) {
    std::string tag = "demand " + std::to_string(a.demand_id);
    for (LinkId l : a.working.links()) claim(l, a.working_wavelength, tag + " working");
    std::size_t prefix = a.backup.links().size();
    if (const CodingAssignment* c = coding_for(a.demand_id)) {
      auto suffix = a.backup.suffix_from(c->coding_node);
      if (!suffix || *suffix != c->coded_path)
        throw ValidationError("coded path " + c->coded_path.to_string() +
                              " is not the tail of backup " + a.backup.to_string() + " of " + tag);
      prefix -= suffix->links().size();
    }
    for (std::size_t i = 0; i < prefix; ++i)
      claim(a.backup.links()[i], a.backup_wavelength, tag + " backup");
  }
  for (const auto& c : codings) {
    std::string tag =
        "coded path of " + std::to_string(c.demand_a) + "^" + std::to_string(c.demand_b);
    for (LinkId l : c.coded_path.links()) claim(l, c.wavelength, tag);
  }
  return grid;
}

inline Solution make_solution(const Topology& topo, std::vector<ProtectedAssignment> assignments,
                              std::vector<CodingAssignment> codings,
                              WavelengthMode mode = WavelengthMode::strict) {
  Solution s;
  s.occupancy = derive_occupancy(topo, assignments, codings);
  s.assignments = std::move(assignments);
  s.codings = std::move(codings);
  s.wavelength_mode = mode;
  return s;
}

/// Number of occupied (link, wavelength) cells.
inline int wavelength_link_cost(const Solution& s) { return s.occupancy.cost(); }

/// (used wavelengths, wavelength-link cost), compared lexicographically.
struct LexCost {
  int wavelengths = 0;
  int link_cost = 0;

  friend auto operator<=>(const LexCost&, const LexCost&) = default;
  friend bool operator==(const LexCost&, const LexCost&) = default;
};

inline LexCost lexicographic_cost(const Solution& s) {
  return {s.occupancy.used_wavelength_count(), s.occupancy.cost()};
}

/// The weighted single objective sum_w x_w + cost / (|E||W| + 1), scaled by
/// (|E||W| + 1) so it stays an exact integer.
inline long long weighted_objective_scaled(const LexCost& c, int links, int wavelengths) {
  long long denom = static_cast<long long>(links) * wavelengths + 1;
  return static_cast<long long>(c.wavelengths) * denom + c.link_cost;
}

inline double weighted_objective(const LexCost& c, int links, int wavelengths) {
  double denom = static_cast<double>(links) * wavelengths + 1.0;
  return c.wavelengths + c.link_cost / denom;
}

}  // namespace ocnet
