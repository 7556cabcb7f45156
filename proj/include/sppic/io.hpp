#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "sppic/bipartite.hpp"
#include "sppic/choice.hpp"
#include "sppic/half_partnership.hpp"
#include "sppic/instance.hpp"
#include "sppic/oracle.hpp"
#include "sppic/poset.hpp"
#include "sppic/symmetric.hpp"

namespace sppic {

using nlohmann::json;

inline json rotation_to_json(const Instance& inst, const Rotation& r) {
  const Graph& g = inst.graph();
  json steps = json::array(), chi = json::object();
  for (std::size_t i = 0; i < r.length(); ++i) {
    const auto& s = r.steps()[i];
    steps.push_back({{"v", g.vertex_id(s.tail)}, {"e", g.edge(s.edge).id}});
    chi[g.edge(s.edge).id] = r.signs()[i];
  }
  return {{"steps", steps}, {"chi", chi}};
}

inline Rotation rotation_from_json(const Instance& inst, const json& doc) {
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array())
    throw InputError("rotation document needs a 'steps' array");
  std::vector<RotationStep> walk;
  for (const auto& s : doc["steps"]) {
    if (!s.is_object() || !s.contains("v") || !s.contains("e") || !s["v"].is_string() ||
        !s["e"].is_string())
      throw InputError("rotation steps need string 'v' and 'e'");
    walk.push_back({inst.graph().vertex(s["v"].get<std::string>()),
                    inst.graph().edge_by_id(s["e"].get<std::string>())});
  }
  return Rotation::from_walk(inst, std::move(walk));
}

inline json route_to_json(const Instance& inst, const Route& route) {
  json steps = json::array();
  for (const auto& s : route.steps)
    steps.push_back({{"rotation", rotation_to_json(inst, s.rotation)},
                     {"weight", s.weight},
                     {"max_weight", s.max_weight},
                     {"from", vector_to_json(inst, s.from)},
                     {"to", vector_to_json(inst, s.to)}});
  return {{"start", vector_to_json(inst, route.start)},
          {"end", vector_to_json(inst, route.end)},
          {"steps", steps},
          {"non_excessive", route.non_excessive},
          {"principal", route.principal},
          {"full", route.full}};
}

inline json poset_to_json(const Instance& inst, const RotationOrder& order) {
  json occ = json::array(), hasse = json::array();
  for (std::size_t i = 0; i < order.family.size(); ++i) {
    const auto& o = order.family[i];
    occ.push_back({{"index", i},
                   {"rotation", rotation_to_json(inst, o.rotation)},
                   {"ordinal", o.ordinal},
                   {"tau", o.weight}});
  }
  for (auto [i, j] : order.hasse()) hasse.push_back({i, j});
  return {{"occurrences", occ}, {"hasse", hasse}};
}

inline std::string rotation_label(const Instance& inst, const Rotation& r) {
  std::string s;
  for (std::size_t i = 0; i < r.length(); ++i) {
    if (i) s += ' ';
    s += (r.signs()[i] > 0 ? '+' : '-') + inst.graph().edge(r.steps()[i].edge).id;
  }
  return s;
}

inline std::string poset_to_dot(const Instance& inst, const RotationOrder& order) {
  std::ostringstream out;
  out << "digraph rotations {\n";
  for (std::size_t i = 0; i < order.family.size(); ++i) {
    const auto& o = order.family[i];
    out << "  o" << i << " [label=\"" << rotation_label(inst, o.rotation) << " #" << o.ordinal
        << " tau=" << o.weight << "\"];\n";
  }
  for (auto [i, j] : order.hasse()) out << "  o" << i << " -> o" << j << ";\n";
  out << "}\n";
  return out.str();
}

inline std::string poset_to_csv(const Instance& inst, const RotationOrder& order) {
  std::ostringstream out;
  out << "kind,index,ordinal,tau,rotation,target\n";
  for (std::size_t i = 0; i < order.family.size(); ++i) {
    const auto& o = order.family[i];
    out << "occurrence," << i << ',' << o.ordinal << ',' << o.weight << ",\""
        << rotation_label(inst, o.rotation) << "\",\n";
  }
  for (auto [i, j] : order.hasse()) out << "hasse," << i << ",,,," << j << '\n';
  return out.str();
}

/// One row per stable vector, then one row per covering pair when the
/// instance is bipartite.
inline std::string stable_set_to_csv(const Instance& inst, const std::vector<EdgeVector>& stable_set) {
  std::ostringstream out;
  out << "kind,index";
  for (EdgeIndex e = 0; e < inst.edge_count(); ++e) out << ',' << inst.graph().edge(e).id;
  out << ",target\n";
  for (std::size_t i = 0; i < stable_set.size(); ++i) {
    out << "vector," << i;
    for (int v : stable_set[i]) out << ',' << v;
    out << ",\n";
  }
  if (inst.has_bipartition() && !stable_set.empty())
    for (auto [i, j] : stable_hasse_edges(inst, stable_set)) {
      out << "hasse," << i;
      for (EdgeIndex e = 0; e < inst.edge_count(); ++e) out << ',';
      out << ',' << j << '\n';
    }
  return out.str();
}

inline json cycle_to_json(const Instance& inst, const OddCycle& k) {
  json walk = json::array();
  for (std::size_t i = 0; i < k.length(); ++i) {
    walk.push_back(inst.graph().vertex_id(k.vertices[i]));
    walk.push_back(inst.graph().edge(k.edges[i]).id);
  }
  walk.push_back(inst.graph().vertex_id(k.vertices.back()));
  return walk;
}

inline OddCycle cycle_from_json(const Instance& inst, const json& walk) {
  if (!walk.is_array() || walk.size() < 3 || walk.size() % 2 == 0)
    throw InputError("cycle must be a list alternating vertex and edge ids");
  std::vector<VertexIndex> vertices;
  std::vector<EdgeIndex> edges;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (!walk[i].is_string()) throw InputError("cycle entries must be strings");
    const std::string id = walk[i].get<std::string>();
    if (i % 2 == 0)
      vertices.push_back(inst.graph().vertex(id));
    else
      edges.push_back(inst.graph().edge_by_id(id));
  }
  return OddCycle::from_walk(inst, std::move(vertices), std::move(edges));
}

inline json cycles_to_json(const Instance& inst, const std::vector<OddCycle>& K) {
  json out = json::array();
  for (const auto& k : K) out.push_back(cycle_to_json(inst, k));
  return out;
}

inline std::vector<OddCycle> cycles_from_json(const Instance& inst, const json& doc) {
  if (!doc.is_array()) throw InputError("K must be a list of cycles");
  std::vector<OddCycle> out;
  for (const auto& w : doc) out.push_back(cycle_from_json(inst, w));
  return out;
}

inline json solution_to_json(const Instance& inst, const Solution& sol) {
  return {{"solvable", sol.solvable},
          {"x", vector_to_json(inst, sol.hp.x)},
          {"K", cycles_to_json(inst, sol.hp.K)},
          {"verified", true}};
}

inline json qb_to_json(const SymmetricInstance& si, const QBOutcome& out) {
  const Instance& sym = si.sym();
  json steps = json::array(), odd = json::array(), even = json::array(), used = json::array();
  for (const auto& s : out.steps)
    steps.push_back({{"rotation", rotation_to_json(sym, s.rotation)},
                     {"tau", s.tau},
                     {"weight", s.weight},
                     {"singular", s.singular}});
  for (const auto& r : out.used) used.push_back(rotation_to_json(sym, r));
  for (const auto& r : out.singular_odd) odd.push_back(rotation_to_json(sym, r));
  for (const auto& r : out.singular_even) even.push_back(rotation_to_json(sym, r));
  return {{"x_tilde", vector_to_json(sym, out.x_tilde)},
          {"steps", steps},
          {"used", used},
          {"singular_odd", odd},
          {"singular_even", even}};
}

inline json report_to_json(const Instance& inst, const VerificationReport& rep) {
  json v = json::array();
  for (const auto& item : rep.violations) {
    json j{{"condition", item.condition}, {"vertex", inst.graph().vertex_id(item.vertex)}};
    if (item.edge) j["edge"] = inst.graph().edge(*item.edge).id;
    if (item.cycle) j["cycle"] = *item.cycle;
    v.push_back(j);
  }
  return {{"ok", rep.ok}, {"violations", v}};
}

inline json axiom_report_to_json(const ChoiceOracle& cf, const AxiomReport& r) {
  json doc{{"vertex", cf.vertex()}, {"axiom", to_string(r.axiom)}, {"holds", r.holds},
           {"checked", r.checked}};
  if (!r.holds) {
    json vectors = json::array();
    for (const auto& z : r.vectors) {
      json zj = json::object();
      for (std::size_t i = 0; i < z.size(); ++i) zj[cf.star_ids()[i]] = z[i];
      vectors.push_back(zj);
    }
    json edges = json::array();
    for (auto e : r.edges) edges.push_back(cf.star_ids()[e]);
    doc["witness"] = {{"vectors", vectors}, {"edges", edges}};
  }
  return doc;
}

}  // namespace sppic
