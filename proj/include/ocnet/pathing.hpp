#pragma once

// Hop-count path primitives: lexicographically tie-broken shortest paths, Yen's
// k-shortest simple paths, Bhandari's minimum-total link-disjoint pair, and the
// per-demand candidate sets consumed by the solvers.

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "ocnet/model.hpp"

namespace ocnet {

inline constexpr int kDefaultCandidatePairs = 5;

/// Working route plus link-disjoint backup route for one demand.
struct CandidatePair {
  Path working;
  Path backup;

  int total_hops() const { return working.hops() + backup.hops(); }

  friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

/// Total hops, then working hops, then working node sequence, then backup node
/// sequence.
inline bool ranked_before(const CandidatePair& x, const CandidatePair& y) {
  if (x.total_hops() != y.total_hops()) return x.total_hops() < y.total_hops();
  if (x.working.hops() != y.working.hops()) return x.working.hops() < y.working.hops();
  if (x.working.nodes() != y.working.nodes()) return x.working.nodes() < y.working.nodes();
  return x.backup.nodes() < y.backup.nodes();
}

/// Candidate pairs per demand, parallel to the demand list.
using CandidateSet = std::vector<std::vector<CandidatePair>>;

/// Shortest src->dst path avoiding the given links and nodes; among equal-hop
/// paths the lexicographically smallest node sequence wins.
inline std::optional<Path> shortest_path(const Topology& topo, NodeId src, NodeId dst,
                                         const std::vector<char>& banned_links = {},
                                         const std::vector<char>& banned_nodes = {}) {
  auto link_ok = [&](LinkId l) {
    return banned_links.empty() || !banned_links[static_cast<std::size_t>(l)];
  };
  auto node_ok = [&](NodeId n) {
    return banned_nodes.empty() || !banned_nodes[static_cast<std::size_t>(n)];
  };
  if (!node_ok(src) || !node_ok(dst)) return std::nullopt;
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(topo.node_count()) + 1, kInf);
  std::queue<NodeId> todo;
  dist[static_cast<std::size_t>(dst)] = 0;
  todo.push(dst);
  while (!todo.empty()) {
    NodeId n = todo.front();
    todo.pop();
    for (const auto& adj : topo.neighbors(n)) {
      if (!link_ok(adj.link) || !node_ok(adj.node)) continue;
      auto& d = dist[static_cast<std::size_t>(adj.node)];
      if (d == kInf) {
        d = dist[static_cast<std::size_t>(n)] + 1;
        todo.push(adj.node);
      }
    }
  }
  if (dist[static_cast<std::size_t>(src)] == kInf) return std::nullopt;
  std::vector<NodeId> nodes{src};
  NodeId cur = src;
  while (cur != dst) {
    // neighbours are sorted, so the first distance-decreasing one is the lexicographic choice
    for (const auto& adj : topo.neighbors(cur)) {
      if (!link_ok(adj.link) || !node_ok(adj.node)) continue;
      if (dist[static_cast<std::size_t>(adj.node)] == dist[static_cast<std::size_t>(cur)] - 1) {
        cur = adj.node;
        break;
      }
    }
    nodes.push_back(cur);
  }
  return Path::from_nodes(topo, std::move(nodes));
}

/// Yen's algorithm: up to k simple paths in (hops, node sequence) order.
inline std::vector<Path> k_shortest_paths(const Topology& topo, NodeId src, NodeId dst, int k) {
  if (src == dst) throw ValidationError("k_shortest_paths needs src != dst");
  if (k < 1) throw ValidationError("k must be >= 1");
  auto first = shortest_path(topo, src, dst);
  if (!first)
    throw NoPath("no path " + std::to_string(src) + "->" + std::to_string(dst));
  std::vector<Path> accepted{*first};
  auto cmp = [](const Path& x, const Path& y) { return shorter_path(x, y); };
  std::set<Path, decltype(cmp)> pending(cmp);

  while (static_cast<int>(accepted.size()) < k) {
    const Path prev = accepted.back();
    for (std::size_t i = 0; i + 1 < prev.nodes().size(); ++i) {
      const NodeId spur = prev.nodes()[i];
      std::vector<NodeId> root(prev.nodes().begin(),
                               prev.nodes().begin() + static_cast<std::ptrdiff_t>(i) + 1);
      std::vector<char> banned_links(static_cast<std::size_t>(topo.link_count()), 0);
      std::vector<char> banned_nodes(static_cast<std::size_t>(topo.node_count()) + 1, 0);
      for (const Path& p : accepted) {
        if (p.nodes().size() > i + 1 &&
            std::equal(root.begin(), root.end(), p.nodes().begin()))
          banned_links[static_cast<std::size_t>(p.links()[i])] = 1;
      }
      for (std::size_t j = 0; j < i; ++j) banned_nodes[static_cast<std::size_t>(root[j])] = 1;
      auto spur_path = shortest_path(topo, spur, dst, banned_links, banned_nodes);
      if (!spur_path) continue;
      std::vector<NodeId> nodes = root;
      nodes.insert(nodes.end(), spur_path->nodes().begin() + 1, spur_path->nodes().end());
      Path candidate = Path::from_nodes(topo, std::move(nodes));
      if (std::find(accepted.begin(), accepted.end(), candidate) == accepted.end())
        pending.insert(std::move(candidate));
    }
    if (pending.empty()) break;
    accepted.push_back(*pending.begin());
    pending.erase(pending.begin());
  }
  return accepted;
}

/// Every simple src->dst path, in (hops, node sequence) order.
inline std::vector<Path> all_simple_paths(const Topology& topo, NodeId src, NodeId dst) {
  std::vector<Path> out;
  std::vector<NodeId> stack{src};
  std::vector<char> on_path(static_cast<std::size_t>(topo.node_count()) + 1, 0);
  on_path[static_cast<std::size_t>(src)] = 1;
  auto dfs = [&](auto&& self, NodeId n) -> void {
    if (n == dst) {
      out.push_back(Path::from_nodes(topo, stack));
      return;
    }
    for (const auto& adj : topo.neighbors(n)) {
      if (on_path[static_cast<std::size_t>(adj.node)]) continue;
      on_path[static_cast<std::size_t>(adj.node)] = 1;
      stack.push_back(adj.node);
      self(self, adj.node);
      stack.pop_back();
      on_path[static_cast<std::size_t>(adj.node)] = 0;
    }
  };
  dfs(dfs, src);
  std::sort(out.begin(), out.end(), shorter_path);
  return out;
}

/// Bhandari's algorithm on the bidirected unit-weight expansion: some
/// link-disjoint pair of minimum total hop count, shorter one first.
inline CandidatePair bhandari_pair(const Topology& topo, NodeId src, NodeId dst) {
  if (src == dst) throw ValidationError("disjoint_pair needs src != dst");
  auto first = shortest_path(topo, src, dst);
  if (!first) throw NoPath("no path " + std::to_string(src) + "->" + std::to_string(dst));

  struct Arc {
    NodeId from, to;
    LinkId link;
    int weight;
  };
  // arcs of first path: forward removed, reverse weighted -1
  std::set<std::pair<NodeId, NodeId>> on_first;
  for (std::size_t i = 0; i + 1 < first->nodes().size(); ++i)
    on_first.emplace(first->nodes()[i], first->nodes()[i + 1]);
  std::vector<Arc> arcs;
  for (const auto& l : topo.links()) {
    for (auto [u, v] : {std::pair{l.a, l.b}, std::pair{l.b, l.a}}) {
      if (on_first.count({u, v})) continue;
      arcs.push_back({u, v, l.id, on_first.count({v, u}) ? -1 : 1});
    }
  }
  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  std::vector<int> dist(static_cast<std::size_t>(topo.node_count()) + 1, kInf);
  std::vector<NodeId> pred(dist.size(), 0);
  dist[static_cast<std::size_t>(src)] = 0;
  for (int round = 0; round < topo.node_count(); ++round) {
    bool changed = false;
    for (const auto& a : arcs) {
      int du = dist[static_cast<std::size_t>(a.from)];
      if (du == kInf) continue;
      if (du + a.weight < dist[static_cast<std::size_t>(a.to)]) {
        dist[static_cast<std::size_t>(a.to)] = du + a.weight;
        pred[static_cast<std::size_t>(a.to)] = a.from;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (dist[static_cast<std::size_t>(dst)] == kInf)
    throw NoDisjointPair("no link-disjoint pair " + std::to_string(src) + "->" +
                         std::to_string(dst));
  std::vector<NodeId> second_rev{dst};
  for (NodeId n = dst; n != src;) {
    n = pred[static_cast<std::size_t>(n)];
    second_rev.push_back(n);
    if (second_rev.size() > static_cast<std::size_t>(topo.node_count()) + 1)
      throw NoDisjointPair("residual search did not terminate");
  }

  // union of both arc sets with opposite traversals of the same link cancelled
  std::multiset<std::pair<NodeId, NodeId>> merged(on_first.begin(), on_first.end());
  for (std::size_t i = second_rev.size() - 1; i > 0; --i) {
    NodeId u = second_rev[i], v = second_rev[i - 1];
    auto opposite = merged.find({v, u});
    if (opposite != merged.end())
      merged.erase(opposite);
    else
      merged.emplace(u, v);
  }
  std::map<NodeId, std::vector<NodeId>> out_arcs;
  for (auto [u, v] : merged) out_arcs[u].push_back(v);
  for (auto& [u, next] : out_arcs) std::sort(next.begin(), next.end());

  auto walk = [&]() {
    std::vector<NodeId> nodes{src};
    NodeId cur = src;
    while (cur != dst) {
      auto& next = out_arcs[cur];
      if (next.empty() || nodes.size() > static_cast<std::size_t>(topo.node_count()))
        throw NoDisjointPair("failed to decompose disjoint pair");
      cur = next.front();
      next.erase(next.begin());
      nodes.push_back(cur);
    }
    return Path::from_nodes(topo, std::move(nodes));
  };
  Path p1 = walk();
  Path p2 = walk();
  if (shorter_path(p2, p1)) std::swap(p1, p2);
  return {std::move(p1), std::move(p2)};
}

/// Shortest path avoiding every link of `avoid`.
inline std::optional<Path> shortest_disjoint_complement(const Topology& topo, const Path& avoid) {
  std::vector<char> banned(static_cast<std::size_t>(topo.link_count()), 0);
  for (LinkId l : avoid.links()) banned[static_cast<std::size_t>(l)] = 1;
  return shortest_path(topo, avoid.source(), avoid.destination(), banned);
}

/// The minimum-total link-disjoint pair that ranks first under ranked_before.
/// Bhandari fixes the optimal total T; working routes are then scanned in
/// (hops, node sequence) order and the first whose shortest disjoint
/// complement closes the total at T wins.
inline CandidatePair disjoint_pair(const Topology& topo, NodeId src, NodeId dst) {
  CandidatePair best = bhandari_pair(topo, src, dst);
  const int total = best.total_hops();
  for (int k = 4;; k *= 2) {
    auto paths = k_shortest_paths(topo, src, dst, k);
    for (const Path& w : paths) {
      if (2 * w.hops() > total) return best;
      auto b = shortest_disjoint_complement(topo, w);
      if (b && w.hops() + b->hops() == total) return {w, std::move(*b)};
    }
    if (static_cast<int>(paths.size()) < k) return best;
  }
}

namespace detail {

inline void rank_and_dedupe(std::vector<CandidatePair>& pairs) {
  std::sort(pairs.begin(), pairs.end(), ranked_before);
  std::vector<CandidatePair> out;
  for (auto& p : pairs)
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  pairs = std::move(out);
}

}  // namespace detail

/// Up to k_pairs link-disjoint pairs per demand: disjoint_pair plus each of the
/// 3 * k_pairs shortest working routes joined with its shortest disjoint
/// complement, deduplicated and ranked. disjoint_pair always ranks first.
inline CandidateSet build_candidates(const Topology& topo, const std::vector<Demand>& demands,
                                     int k_pairs = kDefaultCandidatePairs) {
  if (k_pairs < 1) throw ValidationError("k_pairs must be >= 1");
  CandidateSet out;
  out.reserve(demands.size());
  for (const auto& d : demands) {
    std::vector<CandidatePair> pairs{disjoint_pair(topo, d.source, d.destination)};
    if (k_pairs > 1) {
      for (const Path& w : k_shortest_paths(topo, d.source, d.destination, 3 * k_pairs)) {
        if (auto b = shortest_disjoint_complement(topo, w)) pairs.push_back({w, std::move(*b)});
      }
    }
    detail::rank_and_dedupe(pairs);
    if (static_cast<int>(pairs.size()) > k_pairs) pairs.resize(static_cast<std::size_t>(k_pairs));
    out.push_back(std::move(pairs));
  }
  return out;
}

/// Every ordered (working, backup) pair of link-disjoint simple paths. Only
/// sensible on small graphs.
inline CandidateSet build_full_candidates(const Topology& topo,
                                          const std::vector<Demand>& demands) {
  CandidateSet out;
  for (const auto& d : demands) {
    auto paths = all_simple_paths(topo, d.source, d.destination);
    std::vector<CandidatePair> pairs;
    for (const auto& w : paths)
      for (const auto& b : paths)
        if (&w != &b && !w.shares_link_with(b)) pairs.push_back({w, b});
    if (pairs.empty())
      throw NoDisjointPair("no link-disjoint pair " + std::to_string(d.source) + "->" +
                           std::to_string(d.destination));
    std::sort(pairs.begin(), pairs.end(), ranked_before);
    out.push_back(std::move(pairs));
  }
  return out;
}

}  // namespace ocnet
