#pragma once

// Line-oriented design files:
//
//   # comment
//   wavelength-mode lenient
//   assign 1 5 1 working 5-4-2-1 5 backup 5-7-3-1 2
//   coding 1 7 node 7 path 7-3-1 wavelength 2
//
// `assign <demand> <source> <destination> working <nodes> <wl> backup <nodes> <wl>`
// and `coding <demand a> <demand b> node <v> path <nodes> wavelength <wl>`.
// Structurally broken coding records still load (as long as every step is a
// link) so the validator can report them.

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocnet/errors.hpp"
#include "ocnet/model.hpp"
#include "ocnet/topology_io.hpp"

namespace ocnet {

struct DesignFile {
  std::vector<Demand> demands;
  Solution solution;
};

namespace detail {

inline std::vector<NodeId> parse_node_list(std::string_view text, int line) {
  std::vector<NodeId> nodes;
  for (const auto& piece : split(text, '-')) nodes.push_back(expect_int(piece, line, "path node"));
  return nodes;
}

inline Path parse_path(const Topology& topo, std::string_view text, int line) {
  try {
    return Path::from_nodes(topo, parse_node_list(text, line));
  } catch (const ValidationError& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace detail

/// Builds the Solution with derived occupancy when the design derives
/// cleanly; otherwise the occupancy is left unpopulated.
inline Solution assemble_solution(const Topology& topo, std::vector<ProtectedAssignment> assignments,
                                  std::vector<CodingAssignment> codings, WavelengthMode mode) {
  try {
    return make_solution(topo, assignments, codings, mode);
  } catch (const Error&) {
    Solution s;
    s.assignments = std::move(assignments);
    s.codings = std::move(codings);
    s.wavelength_mode = mode;
    return s;
  }
}

inline DesignFile parse_solution(const Topology& topo, std::string_view text) {
  DesignFile out;
  std::vector<ProtectedAssignment> assignments;
  std::vector<CodingAssignment> codings;
  WavelengthMode mode = WavelengthMode::strict;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto w = detail::words(detail::strip_comment(raw));
    if (w.empty()) continue;
    if (w[0] == "wavelength-mode" && w.size() == 2) {
      if (w[1] == "strict") mode = WavelengthMode::strict;
      else if (w[1] == "lenient") mode = WavelengthMode::lenient;
      else throw ParseError(line_no, "unknown wavelength mode '" + w[1] + "'");
    } else if (w[0] == "assign" && w.size() == 10 && w[4] == "working" && w[7] == "backup") {
      Demand d{detail::expect_int(w[1], line_no, "demand id"),
               detail::expect_int(w[2], line_no, "source"),
               detail::expect_int(w[3], line_no, "destination")};
      out.demands.push_back(d);
      assignments.push_back({d.id, detail::parse_path(topo, w[5], line_no),
                             detail::expect_int(w[6], line_no, "working wavelength"),
                             detail::parse_path(topo, w[8], line_no),
                             detail::expect_int(w[9], line_no, "backup wavelength")});
    } else if (w[0] == "coding" && w.size() == 9 && w[3] == "node" && w[5] == "path" &&
               w[7] == "wavelength") {
      codings.push_back({detail::expect_int(w[1], line_no, "demand id"),
                         detail::expect_int(w[2], line_no, "demand id"),
                         detail::expect_int(w[4], line_no, "coding node"),
                         detail::parse_path(topo, w[6], line_no),
                         detail::expect_int(w[8], line_no, "wavelength")});
    } else {
      throw ParseError(line_no, "unrecognised line '" + std::string(detail::trim(raw)) + "'");
    }
  }
  out.solution = assemble_solution(topo, std::move(assignments), std::move(codings), mode);
  return out;
}

inline std::string emit_solution(const std::vector<Demand>& demands, const Solution& s) {
  std::ostringstream out;
  out << "wavelength-mode " << to_string(s.wavelength_mode) << "\n";
  for (const auto& a : s.assignments) {
    NodeId src = a.working.empty() ? 0 : a.working.source();
    NodeId dst = a.working.empty() ? 0 : a.working.destination();
    for (const auto& d : demands)
      if (d.id == a.demand_id) src = d.source, dst = d.destination;
    out << "assign " << a.demand_id << " " << src << " " << dst << " working "
        << a.working.to_string() << " " << a.working_wavelength << " backup "
        << a.backup.to_string() << " " << a.backup_wavelength << "\n";
  }
  for (const auto& c : s.codings)
    out << "coding " << c.demand_a << " " << c.demand_b << " node " << c.coding_node << " path "
        << c.coded_path.to_string() << " wavelength " << c.wavelength << "\n";
  return out.str();
}

}  // namespace ocnet
