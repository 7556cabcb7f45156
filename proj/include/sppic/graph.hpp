#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sppic/error.hpp"

namespace sppic {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

struct Edge {
  std::string id;
  std::array<VertexIndex, 2> ends;
};

struct EdgeSpec {
  std::string id;
  std::array<std::string, 2> ends;
};

/// Simple undirected graph. Edges are stored in lexicographic order of their
/// ids; that order is the canonical tie-break everywhere. Stars list edge
/// indices in increasing order.
class Graph {
 public:
  Graph() = default;

  static Graph build(std::vector<std::string> vertices, std::vector<EdgeSpec> edges) {
    Graph g;
    g.vertices_ = std::move(vertices);
    for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
      if (!g.vertex_index_.emplace(g.vertices_[i], i).second)
        throw InputError("duplicate vertex id '" + g.vertices_[i] + "'");
    }
    std::sort(edges.begin(), edges.end(),
              [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });
    std::set<std::pair<VertexIndex, VertexIndex>> pairs;
    for (const auto& spec : edges) {
      if (g.edge_index_.count(spec.id)) throw InputError("duplicate edge id '" + spec.id + "'");
      std::array<VertexIndex, 2> ends{};
      for (int k = 0; k < 2; ++k) {
        auto it = g.vertex_index_.find(spec.ends[k]);
        if (it == g.vertex_index_.end())
          throw InputError("edge '" + spec.id + "' names unknown vertex '" + spec.ends[k] + "'");
        ends[k] = it->second;
      }
      if (ends[0] == ends[1]) throw InputError("edge '" + spec.id + "' is a self-loop");
      auto key = std::minmax(ends[0], ends[1]);
      if (!pairs.insert(key).second)
        throw InputError("edge '" + spec.id + "' is parallel to another edge");
      g.edge_index_.emplace(spec.id, g.edges_.size());
      g.edges_.push_back(Edge{spec.id, ends});
    }
    g.stars_.assign(g.vertices_.size(), {});
    for (EdgeIndex e = 0; e < g.edges_.size(); ++e)
      for (VertexIndex v : g.edges_[e].ends) g.stars_[v].push_back(e);
    g.star_pos_.assign(g.edges_.size(), {0, 0});
    for (VertexIndex v = 0; v < g.vertices_.size(); ++v)
      for (std::size_t p = 0; p < g.stars_[v].size(); ++p) {
        EdgeIndex e = g.stars_[v][p];
        g.star_pos_[e][g.edges_[e].ends[0] == v ? 0 : 1] = p;
      }
    return g;
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& vertex_id(VertexIndex v) const { return vertices_.at(v); }
  const std::vector<std::string>& vertex_ids() const { return vertices_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<VertexIndex> find_vertex(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<EdgeIndex> find_edge(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }
  VertexIndex vertex(const std::string& id) const {
    auto v = find_vertex(id);
    if (!v) throw InputError("unknown vertex '" + id + "'");
    return *v;
  }
  EdgeIndex edge_by_id(const std::string& id) const {
    auto e = find_edge(id);
    if (!e) throw InputError("unknown edge '" + id + "'");
    return *e;
  }

  std::span<const EdgeIndex> star(VertexIndex v) const { return stars_.at(v); }

  bool incident(EdgeIndex e, VertexIndex v) const {
    const auto& ends = edges_.at(e).ends;
    return ends[0] == v || ends[1] == v;
  }

  /// Position of e inside star(v); e must be incident to v.
  std::size_t star_position(EdgeIndex e, VertexIndex v) const {
    const auto& ends = edges_.at(e).ends;
    if (ends[0] == v) return star_pos_[e][0];
    if (ends[1] == v) return star_pos_[e][1];
    throw InputError("edge '" + edges_[e].id + "' is not incident to '" + vertices_.at(v) + "'");
  }

  VertexIndex other_end(EdgeIndex e, VertexIndex v) const {
    const auto& ends = edges_.at(e).ends;
    if (ends[0] == v) return ends[1];
    if (ends[1] == v) return ends[0];
    throw InputError("edge '" + edges_[e].id + "' is not incident to '" + vertices_.at(v) + "'");
  }

  /// Proper 2-colouring if one exists (0/1 per vertex), isolated vertices get 0.
  std::optional<std::vector<int>> two_colouring() const {
    std::vector<int> colour(vertices_.size(), -1);
    for (VertexIndex s = 0; s < vertices_.size(); ++s) {
      if (colour[s] >= 0) continue;
      colour[s] = 0;
      std::vector<VertexIndex> stack{s};
      while (!stack.empty()) {
        VertexIndex u = stack.back();
        stack.pop_back();
        for (EdgeIndex e : stars_[u]) {
          VertexIndex w = other_end(e, u);
          if (colour[w] < 0) {
            colour[w] = 1 - colour[u];
            stack.push_back(w);
          } else if (colour[w] == colour[u]) {
            return std::nullopt;
          }
        }
      }
    }
    return colour;
  }

 private:
  std::vector<std::string> vertices_;
  std::map<std::string, VertexIndex> vertex_index_;
  std::vector<Edge> edges_;
  std::map<std::string, EdgeIndex> edge_index_;
  std::vector<std::vector<EdgeIndex>> stars_;
  std::vector<std::array<std::size_t, 2>> star_pos_;
};

}  // namespace sppic
