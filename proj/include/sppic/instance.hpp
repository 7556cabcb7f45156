#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sppic/choice.hpp"
#include "sppic/edge_vector.hpp"
#include "sppic/error.hpp"
#include "sppic/graph.hpp"

namespace sppic {

enum class Side { W, F };

/// Graph, edge capacities, one choice function per vertex and optional
/// worker/firm labels. Immutable after construction.
class Instance {
 public:
  Instance(Graph graph, std::vector<int> caps, std::vector<std::shared_ptr<const ChoiceFunction>> cfs,
           std::optional<std::vector<Side>> sides = std::nullopt)
      : graph_(std::move(graph)), caps_(std::move(caps)), cfs_(std::move(cfs)),
        sides_(std::move(sides)) {
    if (caps_.size() != graph_.edge_count())
      throw InputError("capacities must be given for exactly the edge set");
    for (std::size_t e = 0; e < caps_.size(); ++e)
      if (caps_[e] < 0)
        throw InputError("capacity of edge '" + graph_.edge(e).id + "' is negative");
    if (cfs_.size() != graph_.vertex_count())
      throw InputError("every vertex needs exactly one choice function");
    for (std::size_t v = 0; v < cfs_.size(); ++v)
      if (!cfs_[v]) throw InputError("choice function missing for '" + graph_.vertex_id(v) + "'");
    if (sides_) {
      if (sides_->size() != graph_.vertex_count())
        throw InputError("bipartition must label every vertex");
      for (const auto& e : graph_.edges())
        if ((*sides_)[e.ends[0]] == (*sides_)[e.ends[1]])
          throw InputError("edge '" + e.id + "' does not join W to F");
    }
    oracles_.reserve(graph_.vertex_count());
    for (VertexIndex v = 0; v < graph_.vertex_count(); ++v) {
      std::vector<std::string> ids;
      std::vector<int> local_caps;
      for (EdgeIndex e : graph_.star(v)) {
        ids.push_back(graph_.edge(e).id);
        local_caps.push_back(caps_[e]);
      }
      oracles_.emplace_back(graph_.vertex_id(v), std::move(ids), std::move(local_caps), cfs_[v]);
    }
  }

  const Graph& graph() const { return graph_; }
  std::size_t vertex_count() const { return graph_.vertex_count(); }
  std::size_t edge_count() const { return graph_.edge_count(); }
  int cap(EdgeIndex e) const { return caps_.at(e); }
  const std::vector<int>& caps() const { return caps_; }
  EdgeVector cap_vector() const { return EdgeVector(caps_); }
  int b_max() const {
    int m = 0;
    for (int c : caps_) m = std::max(m, c);
    return m;
  }

  const std::shared_ptr<const ChoiceFunction>& choice_function(VertexIndex v) const {
    return cfs_.at(v);
  }
  const ChoiceOracle& oracle(VertexIndex v) const { return oracles_.at(v); }

  bool has_bipartition() const { return sides_.has_value(); }
  const std::optional<std::vector<Side>>& sides() const { return sides_; }
  Side side(VertexIndex v) const {
    if (!sides_) throw InputError("instance has no bipartition labels");
    return (*sides_)[v];
  }

  EdgeVector zero() const { return EdgeVector(edge_count()); }

  bool in_box(const EdgeVector& x) const {
    if (x.size() != edge_count()) return false;
    for (std::size_t e = 0; e < caps_.size(); ++e)
      if (x[e] < 0 || x[e] > caps_[e]) return false;
    return true;
  }
  void require_in_box(const EdgeVector& x) const {
    if (x.size() != edge_count()) throw InputError("vector domain does not match the edge set");
    if (!in_box(x)) throw InputError("vector outside the capacity box");
  }

  /// x_v: restriction to the star of v.
  EdgeVector restrict(const EdgeVector& x, VertexIndex v) const {
    auto star = graph_.star(v);
    EdgeVector z(star.size());
    for (std::size_t p = 0; p < star.size(); ++p) z[p] = x[star[p]];
    return z;
  }

  /// Writes a star vector back into a full vector.
  void assign_star(EdgeVector& x, VertexIndex v, const EdgeVector& z) const {
    auto star = graph_.star(v);
    for (std::size_t p = 0; p < star.size(); ++p) x[star[p]] = z[p];
  }

 private:
  Graph graph_;
  std::vector<int> caps_;
  std::vector<std::shared_ptr<const ChoiceFunction>> cfs_;
  std::optional<std::vector<Side>> sides_;
  std::vector<ChoiceOracle> oracles_;
};

namespace detail {

inline const nlohmann::json& member(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    throw InputError(std::string("missing field '") + key + "'");
  return obj[key];
}

inline std::vector<std::string> string_list(const nlohmann::json& arr, const char* what) {
  if (!arr.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& s : arr) {
    if (!s.is_string()) throw InputError(std::string(what) + " must contain strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace detail

inline Instance instance_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("instance document must be a JSON object");
  auto vertices = detail::string_list(detail::member(doc, "vertices"), "vertices");
  const auto& edges_json = detail::member(doc, "edges");
  if (!edges_json.is_array()) throw InputError("edges must be an array");
  std::vector<EdgeSpec> specs;
  std::map<std::string, int> cap_by_id;
  for (const auto& ej : edges_json) {
    const auto& id = detail::member(ej, "id");
    if (!id.is_string()) throw InputError("edge id must be a string");
    auto ends = detail::string_list(detail::member(ej, "ends"), "edge ends");
    if (ends.size() != 2)
      throw InputError("edge '" + id.get<std::string>() + "' must have exactly two ends");
    const auto& cap = detail::member(ej, "cap");
    if (!cap.is_number_integer())
      throw InputError("capacity of edge '" + id.get<std::string>() + "' must be an integer");
    if (cap.get<long long>() < 0)
      throw InputError("capacity of edge '" + id.get<std::string>() + "' is negative");
    specs.push_back(EdgeSpec{id.get<std::string>(), {ends[0], ends[1]}});
    cap_by_id[id.get<std::string>()] = cap.get<int>();
  }
  Graph graph = Graph::build(std::move(vertices), std::move(specs));
  std::vector<int> caps(graph.edge_count());
  for (EdgeIndex e = 0; e < graph.edge_count(); ++e) caps[e] = cap_by_id.at(graph.edge(e).id);

  const auto& choice = detail::member(doc, "choice");
  if (!choice.is_object()) throw InputError("choice must be an object keyed by vertex id");
  for (auto it = choice.begin(); it != choice.end(); ++it)
    if (!graph.find_vertex(it.key()))
      throw InputError("choice spec given for unknown vertex '" + it.key() + "'");
  std::vector<std::shared_ptr<const ChoiceFunction>> cfs;
  for (VertexIndex v = 0; v < graph.vertex_count(); ++v) {
    const std::string& vid = graph.vertex_id(v);
    if (!choice.contains(vid)) throw InputError("choice spec missing for vertex '" + vid + "'");
    std::vector<std::string> ids;
    std::vector<int> local_caps;
    for (EdgeIndex e : graph.star(v)) {
      ids.push_back(graph.edge(e).id);
      local_caps.push_back(caps[e]);
    }
    try {
      cfs.push_back(parse_choice_spec(choice[vid], ids, local_caps));
    } catch (const InputError& err) {
      throw InputError("vertex '" + vid + "': " + err.what());
    }
  }

  std::optional<std::vector<Side>> sides;
  if (doc.contains("bipartition") && !doc["bipartition"].is_null()) {
    const auto& bp = doc["bipartition"];
    auto w = detail::string_list(detail::member(bp, "W"), "bipartition W");
    auto f = detail::string_list(detail::member(bp, "F"), "bipartition F");
    std::vector<int> label(graph.vertex_count(), -1);
    auto mark = [&](const std::vector<std::string>& ids, int side) {
      for (const auto& id : ids) {
        auto v = graph.find_vertex(id);
        if (!v) throw InputError("bipartition names unknown vertex '" + id + "'");
        if (label[*v] >= 0) throw InputError("vertex '" + id + "' labelled twice in bipartition");
        label[*v] = side;
      }
    };
    mark(w, 0);
    mark(f, 1);
    std::vector<Side> s(graph.vertex_count());
    for (VertexIndex v = 0; v < graph.vertex_count(); ++v) {
      if (label[v] < 0)
        throw InputError("vertex '" + graph.vertex_id(v) + "' missing from bipartition");
      s[v] = label[v] == 0 ? Side::W : Side::F;
    }
    sides = std::move(s);
  }
  return Instance(std::move(graph), std::move(caps), std::move(cfs), std::move(sides));
}

/// Parses an instance document; syntax errors report the byte position.
inline Instance parse_instance(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& err) {
    throw InputError("syntax error at byte " + std::to_string(err.byte) + ": " + err.what());
  }
  return instance_from_json(doc);
}

inline nlohmann::json instance_to_json(const Instance& inst) {
  const Graph& g = inst.graph();
  nlohmann::json doc;
  doc["vertices"] = g.vertex_ids();
  if (inst.has_bipartition()) {
    nlohmann::json w = nlohmann::json::array(), f = nlohmann::json::array();
    for (VertexIndex v = 0; v < g.vertex_count(); ++v)
      (inst.side(v) == Side::W ? w : f).push_back(g.vertex_id(v));
    doc["bipartition"] = {{"W", w}, {"F", f}};
  }
  nlohmann::json edges = nlohmann::json::array();
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    edges.push_back({{"id", edge.id},
                     {"ends", {g.vertex_id(edge.ends[0]), g.vertex_id(edge.ends[1])}},
                     {"cap", inst.cap(e)}});
  }
  doc["edges"] = edges;
  nlohmann::json choice = nlohmann::json::object();
  for (VertexIndex v = 0; v < g.vertex_count(); ++v)
    choice[g.vertex_id(v)] = inst.choice_function(v)->to_json(inst.oracle(v).star_ids());
  doc["choice"] = choice;
  return doc;
}

inline std::string serialize_instance(const Instance& inst) {
  return instance_to_json(inst).dump(2);
}

/// Vectors are {"edge-id": value}; omitted edges are 0.
inline nlohmann::json vector_to_json(const Instance& inst, const EdgeVector& x) {
  nlohmann::json out = nlohmann::json::object();
  for (EdgeIndex e = 0; e < inst.edge_count(); ++e) out[inst.graph().edge(e).id] = x[e];
  return out;
}

inline EdgeVector vector_from_json(const Instance& inst, const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("edge vector must be an object keyed by edge id");
  EdgeVector x = inst.zero();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_number_integer()) throw InputError("edge vector values must be integers");
    x[inst.graph().edge_by_id(it.key())] = it.value().get<int>();
  }
  return x;
}

}  // namespace sppic
