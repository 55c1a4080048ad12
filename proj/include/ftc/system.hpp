#pragma once

#include <string>
#include <vector>

#include "ftc/chart.hpp"
#include "ftc/errors.hpp"
#include "ftc/index_rule.hpp"
#include "ftc/polygon.hpp"
#include "ftc/similitude.hpp"

namespace ftc {

/// Directed edge of a graph-directed system: a contractive similitude
/// attached to from -> to, mapping Omega_to into Omega_from.
struct SystemEdge {
  std::string id;
  int from = 0; // 0-based graph vertex
  int to = 0;
  Similitude map;
};

/// Iterated function system, possibly graph-directed.  A plain IFS is the
/// single-vertex case: every map is a self-loop on vertex 0.  `omegas[i]`
/// is the invariant open set of graph vertex i.
struct System {
  int t = 1;   // number of graph vertices
  int dim = 2; // ambient dimension, 1 or 2
  long field_d = 0;
  bool is_ifs = true;
  std::vector<SystemEdge> edges;
  std::vector<ConvexPolygon> omegas;
  IndexSetRule rule;
  ChartKind chart = ChartKind::Identity;
  std::string name; // preset name or empty

  static System ifs(int dim, long field_d, std::vector<Similitude> maps, ConvexPolygon omega) {
    System s;
    s.t = 1;
    s.dim = dim;
    s.field_d = field_d;
    s.is_ifs = true;
    for (std::size_t i = 0; i < maps.size(); ++i)
      s.edges.push_back({"f" + std::to_string(i + 1), 0, 0, std::move(maps[i])});
    s.omegas.push_back(std::move(omega));
    s.rule = IndexSetRule::default_for(s.ratios());
    return s;
  }

  std::vector<QuadScalar> ratios() const {
    std::vector<QuadScalar> r;
    r.reserve(edges.size());
    for (const auto& e : edges) r.push_back(e.map.ratio());
    return r;
  }

  std::vector<int> edges_from(int vertex) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].from == vertex) out.push_back(static_cast<int>(i));
    return out;
  }
};

/// One (i,j) block of the invariance report.
struct InvarianceEntry {
  std::string edge_id;
  int from = 0, to = 0;
  bool ok = true;
  std::string witness; // offending image vertex when !ok
};

struct InvarianceReport {
  bool ok = true;
  std::vector<InvarianceEntry> entries;
};

/// Exact containment check S_e(Omega_to) inside Omega_from for every edge.
inline InvarianceReport validate_invariance(const System& sys) {
  InvarianceReport rep;
  for (const auto& e : sys.edges) {
    InvarianceEntry ent{e.id, e.from, e.to, true, ""};
    const ConvexPolygon image = sys.omegas[e.to].map_through(e.map);
    if (const Point* w = sys.omegas[e.from].outside_witness(image)) {
      ent.ok = false;
      rep.ok = false;
      std::string s = "(";
      for (std::size_t k = 0; k < w->size(); ++k) {
        if (k) s += ", ";
        s += (*w)[k].str();
      }
      ent.witness = s + ")";
    }
    rep.entries.push_back(std::move(ent));
  }
  return rep;
}

/// Full structural validation; throws model_error on the first failure.
inline void validate_system(const System& sys) {
  if (sys.dim != 1 && sys.dim != 2) throw model_error("space_dim must be 1 or 2");
  if (sys.t < 1) throw model_error("graph needs at least one vertex");
  if (sys.edges.empty()) throw model_error("system has no maps");
  if (static_cast<int>(sys.omegas.size()) != sys.t)
    throw model_error("need one invariant open set per graph vertex");
  for (const auto& om : sys.omegas)
    if (om.dim() != sys.dim) throw model_error("invariant set dimension mismatch");
  for (const auto& e : sys.edges) {
    if (e.from < 0 || e.from >= sys.t || e.to < 0 || e.to >= sys.t)
      throw model_error("edge '" + e.id + "' references an unknown graph vertex");
    if (e.map.dim() != sys.dim) throw model_error("map dimension mismatch on '" + e.id + "'");
    if (!(e.map.ratio() < QuadScalar(1)))
      throw model_error("non-contractive generator '" + e.id + "' (ratio " +
                        e.map.ratio().str() + ")");
  }
  // Every graph vertex reachable from a root must have an outgoing edge.
  std::vector<char> seen(sys.t, 0);
  std::vector<int> stack;
  for (int i = 0; i < sys.t; ++i) {
    seen[i] = 1;
    stack.push_back(i);
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    bool has_out = false;
    for (const auto& e : sys.edges)
      if (e.from == v) {
        has_out = true;
        if (!seen[e.to]) {
          seen[e.to] = 1;
          stack.push_back(e.to);
        }
      }
    if (!has_out)
      throw model_error("graph vertex " + std::to_string(v + 1) + " is reachable but has no outgoing edge");
  }
  const InvarianceReport inv = validate_invariance(sys);
  if (!inv.ok) {
    for (const auto& ent : inv.entries)
      if (!ent.ok)
        throw model_error("invariance fails for edge '" + ent.edge_id + "': image vertex " +
                          ent.witness + " leaves Omega_" + std::to_string(ent.from + 1));
  }
}

} // namespace ftc
