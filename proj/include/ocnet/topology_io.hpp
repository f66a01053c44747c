#pragma once

// Text formats for topologies, traffic matrices and scenarios; the built-in
// benchmark topologies; seeded random traffic generation.
//
// Topology text:
//   # comment
//   nodes 6 wavelengths 40
//   1 2
//   ...
// Traffic CSV (square, row per source):
//   NodeID,1,2,3
//   1,0,1,0
//   ...

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocnet/model.hpp"

namespace ocnet {

namespace detail {

inline std::string_view trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::string_view strip_comment(std::string_view s) {
  auto hash = s.find('#');
  return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline bool parse_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
    if (s.size() == 1) return false;
  }
  long long v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
    if (v > (1LL << 40)) return false;
  }
  out = neg ? -v : v;
  return true;
}

inline int expect_int(std::string_view s, int line, const char* what) {
  long long v = 0;
  if (!parse_int(s, v)) throw ParseError(line, std::string("expected integer ") + what + ", got '" +
                                                   std::string(s) + "'");
  return static_cast<int>(v);
}

/// One step of the SplitMix64 sequence; used to derive per-instance seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Unbiased integer in [0, bound) by rejection; portable across standard
/// libraries unlike std::uniform_int_distribution.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

}  // namespace detail

inline Topology parse_topology(std::string_view text, std::string name = {}) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  int nodes = -1, wavelengths = -1;
  std::vector<std::pair<NodeId, NodeId>> edges;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    auto w = detail::words(line);
    if (nodes < 0) {
      if (w.size() != 4 || w[0] != "nodes" || w[2] != "wavelengths")
        throw ParseError(line_no, "expected header 'nodes N wavelengths W'");
      nodes = detail::expect_int(w[1], line_no, "node count");
      wavelengths = detail::expect_int(w[3], line_no, "wavelength count");
      continue;
    }
    if (w.size() != 2) throw ParseError(line_no, "expected 'u v' link line");
    int u = detail::expect_int(w[0], line_no, "node id");
    int v = detail::expect_int(w[1], line_no, "node id");
    if (u == v) throw ParseError(line_no, "self-loop " + w[0] + " " + w[1]);
    edges.emplace_back(u, v);
  }
  if (nodes < 0) throw ParseError(line_no, "missing header 'nodes N wavelengths W'");
  return Topology(nodes, wavelengths, edges, std::move(name));
}

inline std::string emit_topology(const Topology& t) {
  std::string out = "nodes " + std::to_string(t.node_count()) + " wavelengths " +
                    std::to_string(t.wavelengths()) + "\n";
  for (const auto& l : t.links()) out += std::to_string(l.a) + " " + std::to_string(l.b) + "\n";
  return out;
}

/// small6: triangular prism. nsfnet14: 21 links covering every adjacency used
/// by the worked example (nodes 12-14 close the mesh). cost239: 11 nodes, 26
/// links (Copenhagen, London, Amsterdam, Berlin, Brussels, Luxembourg, Prague,
/// Paris, Zurich, Vienna, Milan).
inline Topology builtin_topology(std::string_view name, int wavelengths = 40) {
  if (name == "small6")
    return Topology(6, wavelengths,
                    {{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}, {1, 4}, {2, 5}, {3, 6}},
                    "small6");
  if (name == "nsfnet14")
    return Topology(14, wavelengths,
                    {{1, 2},  {1, 3},   {1, 8},   {1, 9},   {1, 11},  {2, 3},   {2, 4},
                     {3, 7},  {4, 5},   {4, 9},   {5, 6},   {5, 7},   {6, 8},   {7, 10},
                     {8, 11}, {10, 11}, {6, 14},  {9, 12},  {10, 13}, {12, 13}, {13, 14}},
                    "nsfnet14");
  if (name == "cost239")
    return Topology(11, wavelengths,
                    {{1, 2},  {1, 3},  {1, 4},  {1, 7},  {2, 3},  {2, 5},  {2, 8},
                     {3, 4},  {3, 5},  {3, 6},  {4, 7},  {4, 8},  {4, 10}, {5, 6},
                     {5, 8},  {5, 11}, {6, 7},  {6, 8},  {6, 9},  {7, 9},  {7, 10},
                     {8, 9},  {8, 11}, {9, 10}, {9, 11}, {10, 11}},
                    "cost239");
  throw UnknownTopology(std::string(name));
}

inline const std::vector<std::string>& builtin_topology_names() {
  static const std::vector<std::string> names{"small6", "nsfnet14", "cost239"};
  return names;
}

/// Square matrix of unit-demand counts; entry (i, j) is the number of i->j demands.
class TrafficMatrix {
 public:
  TrafficMatrix() = default;
  explicit TrafficMatrix(int nodes)
      : nodes_(nodes), counts_(static_cast<std::size_t>(nodes) * static_cast<std::size_t>(nodes), 0) {}

  int nodes() const { return nodes_; }

  int at(NodeId src, NodeId dst) const { return counts_[index(src, dst)]; }

  void set(NodeId src, NodeId dst, int count) {
    if (src == dst && count != 0) throw ValidationError("traffic matrix diagonal must be zero");
    if (count < 0) throw ValidationError("traffic counts must be non-negative");
    counts_[index(src, dst)] = count;
  }

  int total() const {
    int t = 0;
    for (int c : counts_) t += c;
    return t;
  }

  /// Row-major expansion into unit demands with ids 1..total().
  std::vector<Demand> demands() const {
    std::vector<Demand> out;
    for (NodeId s = 1; s <= nodes_; ++s)
      for (NodeId d = 1; d <= nodes_; ++d)
        for (int k = 0; k < at(s, d); ++k)
          out.push_back({static_cast<int>(out.size()) + 1, s, d});
    return out;
  }

  friend bool operator==(const TrafficMatrix&, const TrafficMatrix&) = default;

 private:
  std::size_t index(NodeId s, NodeId d) const {
    if (s < 1 || s > nodes_ || d < 1 || d > nodes_)
      throw ValidationError("traffic index outside 1.." + std::to_string(nodes_));
    return static_cast<std::size_t>(s - 1) * static_cast<std::size_t>(nodes_) +
           static_cast<std::size_t>(d - 1);
  }

  int nodes_ = 0;
  std::vector<int> counts_;
};

inline TrafficMatrix parse_traffic(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  int n = -1;
  int next_row = 1;
  TrafficMatrix m;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    auto cells = detail::split(line, ',');
    if (n < 0) {
      if (cells.size() < 3 || cells[0] != "NodeID")
        throw ParseError(line_no, "expected header 'NodeID,1,2,...'");
      n = static_cast<int>(cells.size()) - 1;
      for (int j = 1; j <= n; ++j)
        if (detail::expect_int(cells[static_cast<std::size_t>(j)], line_no, "column id") != j)
          throw ParseError(line_no, "column ids must be 1.." + std::to_string(n) + " in order");
      m = TrafficMatrix(n);
      continue;
    }
    if (static_cast<int>(cells.size()) != n + 1)
      throw ParseError(line_no, "ragged row: expected " + std::to_string(n + 1) + " cells, got " +
                                    std::to_string(cells.size()));
    if (next_row > n) throw ParseError(line_no, "more rows than columns");
    int row = detail::expect_int(cells[0], line_no, "row id");
    if (row != next_row) throw ParseError(line_no, "expected row " + std::to_string(next_row));
    for (int j = 1; j <= n; ++j) {
      int v = detail::expect_int(cells[static_cast<std::size_t>(j)], line_no, "count");
      if (v < 0) throw ParseError(line_no, "negative count");
      if (j == row && v != 0) throw ParseError(line_no, "non-zero diagonal entry");
      m.set(row, j, v);
    }
    ++next_row;
  }
  if (n < 0) throw ParseError(line_no, "empty traffic matrix");
  if (next_row != n + 1) throw ParseError(line_no, "expected " + std::to_string(n) + " rows");
  return m;
}

inline std::string emit_traffic(const TrafficMatrix& m) {
  std::string out = "NodeID";
  for (int j = 1; j <= m.nodes(); ++j) out += "," + std::to_string(j);
  out += "\n";
  for (int i = 1; i <= m.nodes(); ++i) {
    out += std::to_string(i);
    for (int j = 1; j <= m.nodes(); ++j) out += "," + std::to_string(m.at(i, j));
    out += "\n";
  }
  return out;
}

/// ceil(load * n(n-1)) with a 1e-9 guard so 0.7 * 30 gives 21, not 22.
inline int demand_count_for_load(int nodes, double load) {
  if (!(load > 0.0) || load > 1.0) throw ValidationError("load must lie in (0, 1]");
  const int pairs = nodes * (nodes - 1);
  int k = static_cast<int>(std::ceil(load * pairs - 1e-9));
  return std::clamp(k, 1, pairs);
}

/// Picks ceil(load * n(n-1)) distinct ordered pairs uniformly without
/// replacement, one unit demand each. The engine is std::mt19937_64 seeded with
/// splitmix64(seed ^ splitmix64(instance_index)); pairs are drawn by a partial
/// Fisher-Yates shuffle of the row-major pair list using rejection-sampled
/// bounded integers, so instances reproduce bit-for-bit on any platform.
inline TrafficMatrix generate_traffic(int nodes, double load, std::uint64_t seed,
                                      std::uint64_t instance_index) {
  const int k = demand_count_for_load(nodes, load);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId s = 1; s <= nodes; ++s)
    for (NodeId d = 1; d <= nodes; ++d)
      if (s != d) pairs.emplace_back(s, d);
  TrafficMatrix m(nodes);
  if (k == static_cast<int>(pairs.size())) {
    for (auto [s, d] : pairs) m.set(s, d, 1);
    return m;
  }
  std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(instance_index)));
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    auto j = i + static_cast<std::size_t>(detail::bounded(rng, pairs.size() - i));
    std::swap(pairs[i], pairs[j]);
    m.set(pairs[i].first, pairs[i].second, 1);
  }
  return m;
}

/// Experiment scenario; loaded from a flat key=value file.
struct ScenarioSpec {
  std::string topology = "nsfnet14";
  std::vector<double> loads{0.3, 0.7, 1.0};
  int instances = 20;
  std::uint64_t seed = 1;
  int wavelengths = 40;
  int k_pairs = 5;
};

inline ScenarioSpec parse_scenario(std::string_view text) {
  ScenarioSpec spec;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    std::string key(detail::trim(line.substr(0, eq)));
    std::string value(detail::trim(line.substr(eq + 1)));
    if (key == "topology") {
      spec.topology = value;
    } else if (key == "loads" || key == "load") {
      spec.loads.clear();
      for (const auto& cell : detail::split(value, ',')) {
        try {
          std::size_t used = 0;
          double v = std::stod(cell, &used);
          if (used != cell.size()) throw std::invalid_argument(cell);
          spec.loads.push_back(v);
        } catch (const std::exception&) {
          throw ParseError(line_no, "bad load '" + cell + "'");
        }
      }
    } else if (key == "instances") {
      spec.instances = detail::expect_int(value, line_no, "instance count");
    } else if (key == "seed") {
      long long v = 0;
      if (!detail::parse_int(value, v) || v < 0) throw ParseError(line_no, "bad seed");
      spec.seed = static_cast<std::uint64_t>(v);
    } else if (key == "wavelengths") {
      spec.wavelengths = detail::expect_int(value, line_no, "wavelength count");
    } else if (key == "k_pairs") {
      spec.k_pairs = detail::expect_int(value, line_no, "k_pairs");
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  if (spec.wavelengths < 1) throw ValidationError("wavelengths must be >= 1");
  if (spec.instances < 1) throw ValidationError("instances must be >= 1");
  for (double l : spec.loads)
    if (!(l > 0.0) || l > 1.0) throw ValidationError("load must lie in (0, 1]");
  return spec;
}

}  // namespace ocnet
