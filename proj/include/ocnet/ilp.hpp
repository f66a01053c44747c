#pragma once

// The design ILP as plain data: binary variables, sparse rows, an objective.
// Flow rows use both arcs of every undirected link; occupancy, disjointness
// and coding-link rows add the two arcs of a link together.
//
// Variable names (the manifest) are `kind_i_j_...`:
//   alpha_d_u_v_w  beta_d_u_v_w   working / backup arc u->v on wavelength w
//   theta_d_w      delta_d_v      wavelength of d, coding node of d
//   z_d_v_a_b_w    f_d1_d2        coded arc a->b of d coded at v, partners
//   gamma_a_b_w    x_w            link a-b (a < b) lit on w, wavelength used
// Demand ids, node ids and wavelengths are the model's own 1-based numbers.

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ocnet/errors.hpp"
#include "ocnet/model.hpp"
#include "ocnet/solution_io.hpp"
#include "ocnet/validator.hpp"

namespace ocnet {

enum class VarKind { alpha, beta, theta, z, delta, f, gamma, x };

inline const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::alpha: return "alpha";
    case VarKind::beta: return "beta";
    case VarKind::theta: return "theta";
    case VarKind::z: return "z";
    case VarKind::delta: return "delta";
    case VarKind::f: return "f";
    case VarKind::gamma: return "gamma";
    case VarKind::x: return "x";
  }
  return "?";
}

inline std::size_t tuple_arity(VarKind k) {
  switch (k) {
    case VarKind::alpha:
    case VarKind::beta: return 4;
    case VarKind::z: return 5;
    case VarKind::gamma: return 3;
    case VarKind::theta:
    case VarKind::delta:
    case VarKind::f: return 2;
    case VarKind::x: return 1;
  }
  return 0;
}

struct VarKey {
  VarKind kind = VarKind::x;
  std::vector<int> index;

  friend bool operator==(const VarKey&, const VarKey&) = default;
  friend auto operator<=>(const VarKey&, const VarKey&) = default;
};

inline std::string var_name(const VarKey& key) {
  std::string s = to_string(key.kind);
  for (int i : key.index) s += "_" + std::to_string(i);
  return s;
}

/// Inverse of var_name. Throws ValidationError for names outside the scheme.
inline VarKey parse_var_name(std::string_view name) {
  auto parts = detail::split(name, '_');
  static const std::map<std::string, VarKind, std::less<>> kinds{
      {"alpha", VarKind::alpha}, {"beta", VarKind::beta},   {"theta", VarKind::theta},
      {"z", VarKind::z},         {"delta", VarKind::delta}, {"f", VarKind::f},
      {"gamma", VarKind::gamma}, {"x", VarKind::x}};
  auto bad = [&] { return ValidationError("not a model variable name: '" + std::string(name) + "'"); };
  if (parts.empty()) throw bad();
  auto it = kinds.find(parts[0]);
  if (it == kinds.end() || parts.size() != tuple_arity(it->second) + 1) throw bad();
  VarKey key{it->second, {}};
  for (std::size_t i = 1; i < parts.size(); ++i) {
    long long v = 0;
    if (!detail::parse_int(parts[i], v) || v < 0 || v > std::numeric_limits<int>::max()) throw bad();
    key.index.push_back(static_cast<int>(v));
  }
  return key;
}

enum class Sense { le, eq, ge };

struct Row {
  std::string family;
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Sense sense = Sense::eq;
  double rhs = 0.0;
};

struct RowFamily {
  std::string name;
  std::string meaning;
  long long rows = 0;
};

class IlpModel {
 public:
  int add_variable(VarKey key) {
    auto name = var_name(key);
    auto [it, fresh] = by_name_.try_emplace(name, static_cast<int>(keys_.size()));
    if (fresh) {
      keys_.push_back(std::move(key));
      names_.push_back(std::move(name));
    }
    return it->second;
  }

  int variable(const VarKey& key) const {
    auto it = by_name_.find(var_name(key));
    if (it == by_name_.end()) throw ValidationError("undeclared variable " + var_name(key));
    return it->second;
  }

  std::optional<int> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  void add_row(Row row) {
    for (const auto& [v, c] : row.terms)
      if (v < 0 || v >= variable_count())
        throw ValidationError("row " + row.name + " references an undeclared variable");
    auto it = std::find_if(families_.begin(), families_.end(),
                           [&](const RowFamily& f) { return f.name == row.family; });
    if (it == families_.end()) throw ValidationError("row family " + row.family + " not declared");
    it->rows++;
    rows_.push_back(std::move(row));
  }

  void declare_family(std::string name, std::string meaning) {
    families_.push_back({std::move(name), std::move(meaning), 0});
  }

  int variable_count() const { return static_cast<int>(keys_.size()); }
  const VarKey& key(int v) const { return keys_[static_cast<std::size_t>(v)]; }
  const std::string& name(int v) const { return names_[static_cast<std::size_t>(v)]; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<RowFamily>& families() const { return families_; }

  long long family_rows(std::string_view name) const {
    for (const auto& f : families_)
      if (f.name == name) return f.rows;
    throw ValidationError("no row family " + std::string(name));
  }

  std::vector<std::pair<int, double>> objective;
  Objective objective_kind = Objective::eq1;
  long long weight_denominator = 1;  // |E||W| + 1 for the weighted objective

 private:
  std::vector<VarKey> keys_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> by_name_;
  std::vector<Row> rows_;
  std::vector<RowFamily> families_;
};

namespace ilp_detail {

struct Arc {
  NodeId from;
  NodeId to;
  LinkId link;
};

inline std::vector<Arc> arcs(const Topology& topo) {
  std::vector<Arc> out;
  for (const auto& l : topo.links()) {
    out.push_back({l.a, l.b, l.id});
    out.push_back({l.b, l.a, l.id});
  }
  return out;
}

}  // namespace ilp_detail

/// Row families with their closed-form sizes (|V| nodes, |E| links, |D|
/// demands, |W| wavelengths; "pairs" = |D|(|D|-1), "half" = pairs / 2).
inline const std::vector<std::pair<std::string_view, std::string_view>>& ilp_family_table() {
  static const std::vector<std::pair<std::string_view, std::string_view>> t{
      {"serve", "|D|: one wavelength per demand"},
      {"flow_working", "|V||D||W|: working flow conservation"},
      {"flow_backup", "|V||D||W|: backup flow conservation"},
      {"disjoint", "|D||W||E|: working and backup share no link"},
      {"unique", "|E||W|: wavelength uniqueness, coded tails counted once"},
      {"coding_node_limit", "|D|: at most one coding node"},
      {"coding_node_not_dest", "|D|: no coding at the destination"},
      {"partner_limit", "|D|: at most one partner"},
      {"partner_same_dest", "|D|: no self pairing, partners share the destination"},
      {"partner_symmetric", "half: pairing is symmetric"},
      {"coherence_node", "|D|: a partner implies a coding node"},
      {"coherence_links", "|D||E|: coded links only for coded demands"},
      {"coherence_at_node", "|D||V||E|: coded links only from the chosen node"},
      {"recovery_ww", "half*|E|: partners' working paths disjoint"},
      {"recovery_wb", "pairs*|E|: a partner's working avoids the other's backup"},
      {"same_wavelength_a", "pairs*|W|: partners share the wavelength"},
      {"same_wavelength_b", "pairs*|W|: partners share the wavelength (mirror)"},
      {"same_node_a", "pairs*|V|: partners share the coding node"},
      {"same_node_b", "pairs*|V|: partners share the coding node (mirror)"},
      {"coded_on_backup", "|D||V|*2|E|*|W|: coded arcs lie on the backup"},
      {"coded_flow", "|D||V||V|: coded path runs coding node to destination"},
      {"wavelength_used", "|E||W| (weighted objective only): x_w covers every lit link"},
  };
  return t;
}

inline IlpModel build_model(const Topology& topo, const std::vector<Demand>& demands,
                            Objective objective = Objective::eq1) {
  using ilp_detail::Arc;
  const int W = topo.wavelengths();
  const int V = topo.node_count();
  if (W < 1) throw ValidationError("model needs at least one wavelength");
  IlpModel m;
  m.objective_kind = objective;
  for (const auto& [name, meaning] : ilp_family_table())
    if (objective == Objective::eq21 || name != "wavelength_used")
      m.declare_family(std::string(name), std::string(meaning));
  const auto arcs = ilp_detail::arcs(topo);

  auto arc_key = [](VarKind k, int d, const Arc& a, Wavelength w) {
    return VarKey{k, {d, a.from, a.to, w}};
  };
  auto z_key = [](int d, NodeId v, const Arc& a, Wavelength w) {
    return VarKey{VarKind::z, {d, v, a.from, a.to, w}};
  };
  auto link_key = [&](LinkId l, Wavelength w) {
    const Link& k = topo.link(l);
    return VarKey{VarKind::gamma, {k.a, k.b, w}};
  };

  // declare variables in a fixed order
  for (const auto& d : demands) {
    for (Wavelength w = 1; w <= W; ++w) m.add_variable({VarKind::theta, {d.id, w}});
    for (const auto& a : arcs)
      for (Wavelength w = 1; w <= W; ++w) m.add_variable(arc_key(VarKind::alpha, d.id, a, w));
    for (const auto& a : arcs)
      for (Wavelength w = 1; w <= W; ++w) m.add_variable(arc_key(VarKind::beta, d.id, a, w));
    for (NodeId v = 1; v <= V; ++v) m.add_variable({VarKind::delta, {d.id, v}});
    for (NodeId v = 1; v <= V; ++v)
      for (const auto& a : arcs)
        for (Wavelength w = 1; w <= W; ++w) m.add_variable(z_key(d.id, v, a, w));
  }
  for (const auto& d1 : demands)
    for (const auto& d2 : demands) m.add_variable({VarKind::f, {d1.id, d2.id}});
  for (LinkId l = 0; l < topo.link_count(); ++l)
    for (Wavelength w = 1; w <= W; ++w) m.add_variable(link_key(l, w));
  if (objective == Objective::eq21)
    for (Wavelength w = 1; w <= W; ++w) m.add_variable({VarKind::x, {w}});

  auto var = [&](const VarKey& k) { return m.variable(k); };
  auto tag = [](std::initializer_list<int> xs) {
    std::string s;
    for (int x : xs) s += "_" + std::to_string(x);
    return s;
  };
  auto row = [&](std::string family, std::string suffix, std::vector<std::pair<int, double>> terms,
                 Sense sense, double rhs) {
    std::string name = family + suffix;
    m.add_row({std::move(family), std::move(name), std::move(terms), sense, rhs});
  };
  auto both_arcs = [&](LinkId l) {
    const Link& k = topo.link(l);
    return std::array<Arc, 2>{Arc{k.a, k.b, l}, Arc{k.b, k.a, l}};
  };
  auto f_var = [&](int d1, int d2) { return var({VarKind::f, {d1, d2}}); };

  for (const auto& d : demands) {
    std::vector<std::pair<int, double>> t;
    for (Wavelength w = 1; w <= W; ++w) t.push_back({var({VarKind::theta, {d.id, w}}), 1.0});
    row("serve", tag({d.id}), std::move(t), Sense::eq, 1.0);
  }
  for (VarKind kind : {VarKind::alpha, VarKind::beta}) {
    const std::string family = kind == VarKind::alpha ? "flow_working" : "flow_backup";
    for (NodeId v = 1; v <= V; ++v)
      for (const auto& d : demands)
        for (Wavelength w = 1; w <= W; ++w) {
          std::vector<std::pair<int, double>> t;
          for (const auto& a : arcs) {
            if (a.from == v) t.push_back({var(arc_key(kind, d.id, a, w)), 1.0});
            if (a.to == v) t.push_back({var(arc_key(kind, d.id, a, w)), -1.0});
          }
          if (v == d.source) t.push_back({var({VarKind::theta, {d.id, w}}), -1.0});
          else if (v == d.destination) t.push_back({var({VarKind::theta, {d.id, w}}), 1.0});
          row(family, tag({v, d.id, w}), std::move(t), Sense::eq, 0.0);
        }
  }
  for (const auto& d : demands)
    for (Wavelength w = 1; w <= W; ++w)
      for (LinkId l = 0; l < topo.link_count(); ++l) {
        std::vector<std::pair<int, double>> t;
        for (const auto& a : both_arcs(l)) {
          t.push_back({var(arc_key(VarKind::alpha, d.id, a, w)), 1.0});
          t.push_back({var(arc_key(VarKind::beta, d.id, a, w)), 1.0});
        }
        const Link& k = topo.link(l);
        row("disjoint", tag({d.id, w, k.a, k.b}), std::move(t), Sense::le, 1.0);
      }
  for (LinkId l = 0; l < topo.link_count(); ++l)
    for (Wavelength w = 1; w <= W; ++w) {
      std::vector<std::pair<int, double>> t;
      for (const auto& d : demands)
        for (const auto& a : both_arcs(l)) {
          t.push_back({var(arc_key(VarKind::alpha, d.id, a, w)), 1.0});
          t.push_back({var(arc_key(VarKind::beta, d.id, a, w)), 1.0});
        }
      for (const auto& d : demands)
        for (NodeId v = 1; v <= V; ++v)
          for (const auto& a : both_arcs(l)) t.push_back({var(z_key(d.id, v, a, w)), -0.5});
      t.push_back({var(link_key(l, w)), -1.0});
      const Link& k = topo.link(l);
      row("unique", tag({k.a, k.b, w}), std::move(t), Sense::eq, 0.0);
    }
  for (const auto& d : demands) {
    std::vector<std::pair<int, double>> t;
    for (NodeId v = 1; v <= V; ++v) t.push_back({var({VarKind::delta, {d.id, v}}), 1.0});
    row("coding_node_limit", tag({d.id}), std::move(t), Sense::le, 1.0);
    row("coding_node_not_dest", tag({d.id}), {{var({VarKind::delta, {d.id, d.destination}}), 1.0}},
        Sense::eq, 0.0);
  }
  for (const auto& d1 : demands) {
    std::vector<std::pair<int, double>> limit, mismatch;
    for (const auto& d2 : demands) {
      limit.push_back({f_var(d1.id, d2.id), 1.0});
      if (d2.id == d1.id || d2.destination != d1.destination)
        mismatch.push_back({f_var(d1.id, d2.id), 1.0});
    }
    row("partner_limit", tag({d1.id}), std::move(limit), Sense::le, 1.0);
    row("partner_same_dest", tag({d1.id}), std::move(mismatch), Sense::eq, 0.0);
  }
  for (std::size_t i = 0; i < demands.size(); ++i)
    for (std::size_t j = i + 1; j < demands.size(); ++j) {
      int a = demands[i].id, b = demands[j].id;
      row("partner_symmetric", tag({a, b}), {{f_var(a, b), 1.0}, {f_var(b, a), -1.0}}, Sense::eq,
          0.0);
    }
  for (const auto& d1 : demands) {
    std::vector<std::pair<int, double>> t;
    for (const auto& d2 : demands) t.push_back({f_var(d1.id, d2.id), 1.0});
    for (NodeId v = 1; v <= V; ++v) t.push_back({var({VarKind::delta, {d1.id, v}}), -1.0});
    row("coherence_node", tag({d1.id}), std::move(t), Sense::eq, 0.0);
  }
  for (const auto& d1 : demands)
    for (LinkId l = 0; l < topo.link_count(); ++l) {
      std::vector<std::pair<int, double>> t;
      for (Wavelength w = 1; w <= W; ++w)
        for (NodeId v = 1; v <= V; ++v)
          for (const auto& a : both_arcs(l)) t.push_back({var(z_key(d1.id, v, a, w)), 1.0});
      for (const auto& d2 : demands) t.push_back({f_var(d1.id, d2.id), -1.0});
      const Link& k = topo.link(l);
      row("coherence_links", tag({d1.id, k.a, k.b}), std::move(t), Sense::le, 0.0);
    }
  for (const auto& d : demands)
    for (NodeId v = 1; v <= V; ++v)
      for (LinkId l = 0; l < topo.link_count(); ++l) {
        std::vector<std::pair<int, double>> t;
        for (Wavelength w = 1; w <= W; ++w)
          for (const auto& a : both_arcs(l)) t.push_back({var(z_key(d.id, v, a, w)), 1.0});
        t.push_back({var({VarKind::delta, {d.id, v}}), -1.0});
        const Link& k = topo.link(l);
        row("coherence_at_node", tag({d.id, v, k.a, k.b}), std::move(t), Sense::le, 0.0);
      }
  auto on_link = [&](VarKind kind, int d, LinkId l, std::vector<std::pair<int, double>>& t) {
    for (Wavelength w = 1; w <= W; ++w)
      for (const auto& a : both_arcs(l)) t.push_back({var(arc_key(kind, d, a, w)), 1.0});
  };
  for (std::size_t i = 0; i < demands.size(); ++i)
    for (std::size_t j = i + 1; j < demands.size(); ++j)
      for (LinkId l = 0; l < topo.link_count(); ++l) {
        int a = demands[i].id, b = demands[j].id;
        std::vector<std::pair<int, double>> t;
        on_link(VarKind::alpha, a, l, t);
        on_link(VarKind::alpha, b, l, t);
        t.push_back({f_var(a, b), 1.0});
        const Link& k = topo.link(l);
        row("recovery_ww", tag({a, b, k.a, k.b}), std::move(t), Sense::le, 2.0);
      }
  for (const auto& d1 : demands)
    for (const auto& d2 : demands) {
      if (d1.id == d2.id) continue;
      for (LinkId l = 0; l < topo.link_count(); ++l) {
        std::vector<std::pair<int, double>> t;
        on_link(VarKind::alpha, d1.id, l, t);
        on_link(VarKind::beta, d2.id, l, t);
        t.push_back({f_var(d1.id, d2.id), 1.0});
        const Link& k = topo.link(l);
        row("recovery_wb", tag({d1.id, d2.id, k.a, k.b}), std::move(t), Sense::le, 2.0);
      }
      for (Wavelength w = 1; w <= W; ++w) {
        int t1 = var({VarKind::theta, {d1.id, w}}), t2 = var({VarKind::theta, {d2.id, w}});
        row("same_wavelength_a", tag({d1.id, d2.id, w}),
            {{t1, 1.0}, {t2, -1.0}, {f_var(d1.id, d2.id), 1.0}}, Sense::le, 1.0);
        row("same_wavelength_b", tag({d1.id, d2.id, w}),
            {{t2, 1.0}, {t1, -1.0}, {f_var(d1.id, d2.id), 1.0}}, Sense::le, 1.0);
      }
      for (NodeId v = 1; v <= V; ++v) {
        int s1 = var({VarKind::delta, {d1.id, v}}), s2 = var({VarKind::delta, {d2.id, v}});
        row("same_node_a", tag({d1.id, d2.id, v}),
            {{s1, 1.0}, {s2, -1.0}, {f_var(d1.id, d2.id), 1.0}}, Sense::le, 1.0);
        row("same_node_b", tag({d1.id, d2.id, v}),
            {{s2, 1.0}, {s1, -1.0}, {f_var(d1.id, d2.id), 1.0}}, Sense::le, 1.0);
      }
    }
  for (const auto& d : demands)
    for (NodeId v = 1; v <= V; ++v)
      for (const auto& a : arcs)
        for (Wavelength w = 1; w <= W; ++w)
          row("coded_on_backup", tag({d.id, v, a.from, a.to, w}),
              {{var(z_key(d.id, v, a, w)), 1.0}, {var(arc_key(VarKind::beta, d.id, a, w)), -1.0}},
              Sense::le, 0.0);
  for (const auto& d : demands)
    for (NodeId v = 1; v <= V; ++v)
      for (NodeId i = 1; i <= V; ++i) {
        std::vector<std::pair<int, double>> t;
        for (const auto& a : arcs)
          for (Wavelength w = 1; w <= W; ++w) {
            if (a.from == i) t.push_back({var(z_key(d.id, v, a, w)), 1.0});
            if (a.to == i) t.push_back({var(z_key(d.id, v, a, w)), -1.0});
          }
        if (i == v) t.push_back({var({VarKind::delta, {d.id, v}}), -1.0});
        else if (i == d.destination) t.push_back({var({VarKind::delta, {d.id, v}}), 1.0});
        row("coded_flow", tag({d.id, v, i}), std::move(t), Sense::eq, 0.0);
      }

  m.weight_denominator = static_cast<long long>(topo.link_count()) * W + 1;
  const double weight =
      objective == Objective::eq21 ? 1.0 / static_cast<double>(m.weight_denominator) : 1.0;
  for (LinkId l = 0; l < topo.link_count(); ++l)
    for (Wavelength w = 1; w <= W; ++w) {
      m.objective.push_back({var(link_key(l, w)), weight});
      if (objective == Objective::eq21) {
        const Link& k = topo.link(l);
        row("wavelength_used", tag({w, k.a, k.b}),
            {{var({VarKind::x, {w}}), 1.0}, {var(link_key(l, w)), -1.0}}, Sense::ge, 0.0);
      }
    }
  if (objective == Objective::eq21)
    for (Wavelength w = 1; w <= W; ++w) m.objective.push_back({var({VarKind::x, {w}}), 1.0});
  return m;
}

// ---------------------------------------------------------------------------
// Export

namespace ilp_detail {

inline std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void lp_terms(std::ostringstream& out, const IlpModel& m,
                     const std::vector<std::pair<int, double>>& terms) {
  int on_line = 0;
  bool first = true;
  for (const auto& [v, c] : terms) {
    if (c == 0.0) continue;
    if (on_line == 6) {
      out << "\n   ";
      on_line = 0;
    }
    const double mag = std::fabs(c);
    out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (mag != 1.0) out << number(mag) << " ";
    out << m.name(v);
    first = false;
    ++on_line;
  }
  if (first) out << "0 " << m.name(terms.empty() ? 0 : terms.front().first);
}

}  // namespace ilp_detail

enum class ExportFormat { lp, mps };

/// CPLEX-style LP text or free-format MPS. Coefficients are written with 17
/// significant digits so every double (including 1/(|E||W|+1)) round-trips.
inline std::string export_model(const IlpModel& m, ExportFormat format) {
  using ilp_detail::number;
  std::ostringstream out;
  if (format == ExportFormat::lp) {
    out << "\\ " << m.variable_count() << " binary variables, " << m.rows().size() << " rows\n";
    if (m.objective_kind == Objective::eq21)
      out << "\\ link-cost weight = 1/" << m.weight_denominator << "\n";
    out << "Minimize\n obj: ";
    ilp_detail::lp_terms(out, m, m.objective);
    out << "\nSubject To\n";
    for (const auto& r : m.rows()) {
      out << " " << r.name << ": ";
      ilp_detail::lp_terms(out, m, r.terms);
      out << (r.sense == Sense::le ? " <= " : r.sense == Sense::ge ? " >= " : " = ")
          << number(r.rhs) << "\n";
    }
    out << "Binary\n";
    for (int v = 0; v < m.variable_count(); ++v) out << " " << m.name(v) << "\n";
    out << "End\n";
    return out.str();
  }
  // free MPS; columns grouped by variable
  out << "NAME ocnet\nROWS\n N obj\n";
  for (const auto& r : m.rows())
    out << " " << (r.sense == Sense::le ? "L" : r.sense == Sense::ge ? "G" : "E") << " " << r.name
        << "\n";
  std::vector<std::vector<std::pair<std::size_t, double>>> columns(
      static_cast<std::size_t>(m.variable_count()));
  constexpr std::size_t kObjective = static_cast<std::size_t>(-1);
  for (const auto& [v, c] : m.objective) columns[static_cast<std::size_t>(v)].push_back({kObjective, c});
  for (std::size_t i = 0; i < m.rows().size(); ++i)
    for (const auto& [v, c] : m.rows()[i].terms) columns[static_cast<std::size_t>(v)].push_back({i, c});
  out << "COLUMNS\n MARKER MARKER INTORG\n";
  for (int v = 0; v < m.variable_count(); ++v) {
    std::map<std::size_t, double> merged;  // the same variable may appear twice in a row
    for (const auto& [r, c] : columns[static_cast<std::size_t>(v)]) merged[r] += c;
    bool any = false;
    for (const auto& [r, c] : merged) {
      if (c == 0.0) continue;
      out << " " << m.name(v) << " " << (r == kObjective ? std::string("obj") : m.rows()[r].name)
          << " " << number(c) << "\n";
      any = true;
    }
    if (!any) out << " " << m.name(v) << " obj 0\n";
  }
  out << " MARKER MARKER INTEND\nRHS\n";
  for (const auto& r : m.rows())
    if (r.rhs != 0.0) out << " rhs " << r.name << " " << number(r.rhs) << "\n";
  out << "BOUNDS\n";
  for (int v = 0; v < m.variable_count(); ++v) out << " BV bnd " << m.name(v) << "\n";
  out << "ENDATA\n";
  return out.str();
}

/// Sidecar listing: family sizes, then `index name kind tuple` per variable.
inline std::string export_manifest(const IlpModel& m) {
  std::ostringstream out;
  out << "objective " << to_string(m.objective_kind) << "\n";
  for (const auto& f : m.families()) out << "family " << f.name << " rows " << f.rows << "\n";
  for (int v = 0; v < m.variable_count(); ++v) {
    const auto& k = m.key(v);
    out << "var " << v << " " << m.name(v) << " " << to_string(k.kind);
    for (int i : k.index) out << " " << i;
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Indicator encoding and row checking

/// 0/1 value per model variable for a design, following the variable
/// definitions literally (paths by traversal direction, coded arcs for both
/// partners, lit links from the routes). Designs that break the rules still
/// encode; the rows then say which rule broke.
inline std::vector<double> encode_indicators(const IlpModel& m, const Topology& topo,
                                             const std::vector<Demand>& demands,
                                             const Solution& s) {
  std::vector<double> x(static_cast<std::size_t>(m.variable_count()), 0.0);
  auto set = [&](const VarKey& k) {
    if (auto v = m.find(var_name(k))) x[static_cast<std::size_t>(*v)] = 1.0;
  };
  auto walk = [&](VarKind kind, int d, const Path& p, Wavelength w) {
    for (std::size_t i = 0; i + 1 < p.nodes().size(); ++i)
      set({kind, {d, p.nodes()[i], p.nodes()[i + 1], w}});
  };
  std::map<std::pair<LinkId, Wavelength>, double> load;
  auto count = [&](const Path& p, Wavelength w, double amount) {
    for (LinkId l : p.links()) load[{l, w}] += amount;
  };
  std::map<int, NodeId> destination;
  for (const auto& d : demands) destination[d.id] = d.destination;
  for (const auto& a : s.assignments) {
    set({VarKind::theta, {a.demand_id, a.working_wavelength}});
    walk(VarKind::alpha, a.demand_id, a.working, a.working_wavelength);
    walk(VarKind::beta, a.demand_id, a.backup, a.backup_wavelength);
    count(a.working, a.working_wavelength, 1.0);
    count(a.backup, a.backup_wavelength, 1.0);
  }
  for (const auto& c : s.codings) {
    set({VarKind::f, {c.demand_a, c.demand_b}});
    set({VarKind::f, {c.demand_b, c.demand_a}});
    for (int d : {c.demand_a, c.demand_b}) {
      set({VarKind::delta, {d, c.coding_node}});
      const ProtectedAssignment* a = s.find(d);
      if (!a) continue;
      // each partner's own backup tail from the coding node
      auto tail = a->backup.suffix_from(c.coding_node);
      const Path& coded = tail ? *tail : c.coded_path;
      for (std::size_t i = 0; i + 1 < coded.nodes().size(); ++i)
        set({VarKind::z, {d, c.coding_node, coded.nodes()[i], coded.nodes()[i + 1], c.wavelength}});
      count(coded, c.wavelength, -0.5);
    }
  }
  std::set<Wavelength> used;
  for (const auto& [cell, amount] : load) {
    if (amount <= 0.0) continue;
    const Link& k = topo.link(cell.first);
    set({VarKind::gamma, {k.a, k.b, cell.second}});
    used.insert(cell.second);
  }
  for (Wavelength w : used) set({VarKind::x, {w}});
  return x;
}

inline double row_activity(const Row& r, const std::vector<double>& values) {
  double sum = 0.0;
  for (const auto& [v, c] : r.terms) sum += c * values[static_cast<std::size_t>(v)];
  return sum;
}

inline bool row_satisfied(const Row& r, const std::vector<double>& values, double tol = 1e-9) {
  const double a = row_activity(r, values);
  switch (r.sense) {
    case Sense::le: return a <= r.rhs + tol;
    case Sense::ge: return a >= r.rhs - tol;
    case Sense::eq: return std::fabs(a - r.rhs) <= tol;
  }
  return false;
}

/// Names of the rows the point violates.
inline std::vector<std::string> violated_rows(const IlpModel& m, const std::vector<double>& values) {
  std::vector<std::string> out;
  for (const auto& r : m.rows())
    if (!row_satisfied(r, values)) out.push_back(r.name);
  return out;
}

inline double objective_value(const IlpModel& m, const std::vector<double>& values) {
  double sum = 0.0;
  for (const auto& [v, c] : m.objective) sum += c * values[static_cast<std::size_t>(v)];
  return sum;
}

// ---------------------------------------------------------------------------
// Import

namespace ilp_detail {

// Follows a set of arcs from `from` to `to`; every arc must be used exactly
// once on a simple path.
inline std::vector<NodeId> trace(const std::map<NodeId, std::vector<NodeId>>& next, std::size_t arc_count,
                                 NodeId from, NodeId to, const std::string& what) {
  std::vector<NodeId> nodes{from};
  std::set<NodeId> seen{from};
  while (nodes.back() != to) {
    auto it = next.find(nodes.back());
    if (it == next.end() || it->second.empty())
      throw InconsistentSupport(what + " stops at node " + std::to_string(nodes.back()));
    if (it->second.size() > 1)
      throw InconsistentSupport(what + " branches at node " + std::to_string(nodes.back()));
    NodeId n = it->second.front();
    if (!seen.insert(n).second)
      throw InconsistentSupport(what + " revisits node " + std::to_string(n));
    nodes.push_back(n);
  }
  if (nodes.size() - 1 != arc_count)
    throw InconsistentSupport(what + " has arcs off the path (a cycle or stray flow)");
  return nodes;
}

}  // namespace ilp_detail

/// Rebuilds a design from `name value` lines (missing names read as 0) and
/// runs the validator on it. Throws NonBinaryValue, InconsistentSupport (the
/// support is not a set of paths, or the design fails validation), or
/// ParseError for unknown names.
inline Solution import_external_solution(const IlpModel& m, const Topology& topo,
                                         const std::vector<Demand>& demands,
                                         std::string_view text) {
  std::map<VarKey, bool> on;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto w = detail::words(detail::strip_comment(raw));
    if (w.empty()) continue;
    if (w.size() != 2) throw ParseError(line_no, "expected 'name value'");
    if (!m.find(w[0])) throw ParseError(line_no, "unknown variable '" + w[0] + "'");
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(w[1], &used);
      if (used != w[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad value '" + w[1] + "'");
    }
    const bool one = std::fabs(v - 1.0) <= 1e-6;
    if (!one && std::fabs(v) > 1e-6)
      throw NonBinaryValue(w[0] + " = " + w[1] + " is not binary");
    if (one) on[parse_var_name(w[0])] = true;
  }
  auto lit = [&](VarKind k, std::vector<int> idx) { return on.count(VarKey{k, std::move(idx)}) > 0; };

  std::vector<ProtectedAssignment> assignments;
  std::map<int, Wavelength> theta;
  for (const auto& d : demands) {
    std::vector<Wavelength> ws;
    for (Wavelength w = 1; w <= topo.wavelengths(); ++w)
      if (lit(VarKind::theta, {d.id, w})) ws.push_back(w);
    if (ws.size() != 1)
      throw InconsistentSupport("demand " + std::to_string(d.id) + " has " +
                                std::to_string(ws.size()) + " wavelengths");
    theta[d.id] = ws.front();
    Path routes[2];
    for (VarKind kind : {VarKind::alpha, VarKind::beta}) {
      std::map<NodeId, std::vector<NodeId>> next;
      std::size_t count = 0;
      for (const auto& [key, value] : on) {
        if (key.kind != kind || key.index[0] != d.id) continue;
        if (key.index[3] != ws.front())
          throw InconsistentSupport(std::string(to_string(kind)) + " of demand " +
                                    std::to_string(d.id) + " off its wavelength");
        next[key.index[1]].push_back(key.index[2]);
        ++count;
      }
      const std::string what =
          std::string(kind == VarKind::alpha ? "working" : "backup") + " support of demand " +
          std::to_string(d.id);
      routes[kind == VarKind::alpha ? 0 : 1] = Path::from_nodes(
          topo, ilp_detail::trace(next, count, d.source, d.destination, what));
    }
    assignments.push_back({d.id, routes[0], ws.front(), routes[1], ws.front()});
  }

  std::vector<CodingAssignment> codings;
  std::map<int, NodeId> destination;
  for (const auto& d : demands) destination[d.id] = d.destination;
  for (const auto& [key, value] : on) {
    if (key.kind != VarKind::f) continue;
    const int a = key.index[0], b = key.index[1];
    if (!lit(VarKind::f, {b, a}))
      throw InconsistentSupport("pairing " + std::to_string(a) + "^" + std::to_string(b) +
                                " is not symmetric");
    if (a >= b) continue;
    std::vector<NodeId> nodes;
    for (NodeId v = 1; v <= topo.node_count(); ++v)
      if (lit(VarKind::delta, {a, v})) nodes.push_back(v);
    if (nodes.size() != 1)
      throw InconsistentSupport("coded demand " + std::to_string(a) + " has " +
                                std::to_string(nodes.size()) + " coding nodes");
    const NodeId v = nodes.front();
    std::map<NodeId, std::vector<NodeId>> next;
    std::set<Wavelength> ws;
    std::size_t count = 0;
    for (const auto& [zk, zv] : on) {
      if (zk.kind != VarKind::z || zk.index[0] != a || zk.index[1] != v) continue;
      next[zk.index[2]].push_back(zk.index[3]);
      ws.insert(zk.index[4]);
      ++count;
    }
    if (ws.size() != 1)
      throw InconsistentSupport("coded path of demand " + std::to_string(a) +
                                " is not on one wavelength");
    auto coded = Path::from_nodes(
        topo, ilp_detail::trace(next, count, v, destination.at(a),
                                "coded support of demand " + std::to_string(a)));
    codings.push_back({a, b, v, coded, *ws.begin()});
  }
  Solution s = assemble_solution(topo, std::move(assignments), std::move(codings),
                                 WavelengthMode::strict);
  auto report = validate(topo, demands, s, DesignMode::rwnca, WavelengthMode::strict);
  if (!report.passed()) {
    std::string first;
    for (const auto& f : report.families)
      if (!f.passed()) {
        first = f.name + ": " + f.offenders.front();
        break;
      }
    throw InconsistentSupport("reconstructed design fails validation (" + first + ")");
  }
  return s;
}

}  // namespace ocnet
