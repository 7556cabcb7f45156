#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sppic/sppic.hpp"

namespace fixtures {

using nlohmann::json;

/// Quota-rule instances assembled from preference lists.
class Builder {
 public:
  Builder& vertex(const std::string& id, int quota, std::vector<std::string> prefs) {
    vertices_.push_back(id);
    choice_[id] = {{"type", "linear_order_quota"}, {"quota", quota}, {"order", prefs}};
    return *this;
  }
  Builder& edge(const std::string& id, const std::string& u, const std::string& v, int cap = 1) {
    edges_.push_back({{"id", id}, {"ends", {u, v}}, {"cap", cap}});
    return *this;
  }
  Builder& sides(std::vector<std::string> w, std::vector<std::string> f) {
    bipartition_ = json{{"W", w}, {"F", f}};
    return *this;
  }
  Builder& raw_choice(const std::string& id, json spec) {
    choice_[id] = std::move(spec);
    return *this;
  }

  json doc() const {
    json d{{"vertices", vertices_}, {"edges", edges_}, {"choice", choice_}};
    if (!bipartition_.is_null()) d["bipartition"] = bipartition_;
    return d;
  }
  sppic::Instance build() const { return sppic::instance_from_json(doc()); }

 private:
  std::vector<std::string> vertices_;
  json edges_ = json::array();
  json choice_ = json::object();
  json bipartition_;
};

/// Two workers, two firms; each worker prefers a different firm than the one
/// preferring it.
inline Builder b4_builder(int cap = 1, int quota = 1) {
  Builder b;
  b.vertex("w1", quota, {"w1f1", "w1f2"})
      .vertex("w2", quota, {"w2f2", "w2f1"})
      .vertex("f1", quota, {"w2f1", "w1f1"})
      .vertex("f2", quota, {"w1f2", "w2f2"})
      .edge("w1f1", "w1", "f1", cap)
      .edge("w1f2", "w1", "f2", cap)
      .edge("w2f1", "w2", "f1", cap)
      .edge("w2f2", "w2", "f2", cap)
      .sides({"w1", "w2"}, {"f1", "f2"});
  return b;
}
inline sppic::Instance b4(int cap = 1, int quota = 1) { return b4_builder(cap, quota).build(); }

/// Cyclic triangle: a prefers ab over ca, b prefers bc over ab, c prefers ca
/// over bc. No stable vector exists at unit capacity.
inline Builder triangle_builder(int cap = 1, int quota = 1) {
  Builder b;
  b.vertex("a", quota, {"ab", "ca"})
      .vertex("b", quota, {"bc", "ab"})
      .vertex("c", quota, {"ca", "bc"})
      .edge("ab", "a", "b", cap)
      .edge("bc", "b", "c", cap)
      .edge("ca", "c", "a", cap);
  return b;
}
inline sppic::Instance triangle(int cap = 1, int quota = 1) {
  return triangle_builder(cap, quota).build();
}

/// Triangle where everybody ranks the same pair first: ab is stable.
inline sppic::Instance solvable_triangle() {
  Builder b;
  b.vertex("a", 1, {"ab", "ca"})
      .vertex("b", 1, {"ab", "bc"})
      .vertex("c", 1, {"ca", "bc"})
      .edge("ab", "a", "b")
      .edge("bc", "b", "c")
      .edge("ca", "c", "a");
  return b.build();
}

/// Portable draws from an mt19937_64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int uniform(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin(int percent) { return uniform(0, 99) < percent; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[gen_() % i]);
  }

 private:
  std::mt19937_64 gen_;
};

struct RandomShape {
  int workers = 3, firms = 3;
  int edge_percent = 70;
  int max_cap = 2, max_quota = 2;
  /// Chance that a firm ranks workers in reverse of how they rank the firm.
  int reverse_percent = 0;
};

/// Random bipartite quota instance; vertices with no edge are dropped.
inline sppic::Instance random_bipartite(std::uint64_t seed, const RandomShape& shape = {}) {
  Rng rng(seed);
  std::map<std::string, std::vector<std::string>> stars;
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> edges;
  for (int i = 0; i < shape.workers; ++i)
    for (int j = 0; j < shape.firms; ++j) {
      if (!rng.coin(shape.edge_percent)) continue;
      std::string w = "w" + std::to_string(i), f = "f" + std::to_string(j);
      std::string id = w + f;
      edges.push_back({id, {w, f}});
      stars[w].push_back(id);
      stars[f].push_back(id);
    }
  if (edges.empty()) {
    edges.push_back({"w0f0", {"w0", "f0"}});
    stars["w0"].push_back("w0f0");
    stars["f0"].push_back("w0f0");
  }
  Builder b;
  std::vector<std::string> w_side, f_side;
  std::map<std::string, int> quota;
  for (auto& [v, star] : stars) {
    rng.shuffle(star);
    quota[v] = rng.uniform(1, shape.max_quota);
    (v[0] == 'w' ? w_side : f_side).push_back(v);
  }
  if (shape.reverse_percent > 0) {
    std::map<std::string, std::size_t> worker_rank;
    for (const auto& w : w_side)
      for (std::size_t p = 0; p < stars[w].size(); ++p) worker_rank[stars[w][p]] = p;
    for (const auto& f : f_side)
      if (rng.coin(shape.reverse_percent))
        std::stable_sort(stars[f].begin(), stars[f].end(), [&](const std::string& a, const std::string& c) {
          return worker_rank[a] > worker_rank[c];
        });
  }
  for (const auto& [v, star] : stars) b.vertex(v, quota[v], star);
  for (const auto& [id, ends] : edges) b.edge(id, ends.first, ends.second, rng.uniform(1, shape.max_cap));
  b.sides(w_side, f_side);
  return b.build();
}

/// n workers and n firms with cyclically shifted preferences, firm labels
/// shuffled and a few edges dropped. Every vertex has the same quota.
inline sppic::Instance random_latin(std::uint64_t seed, int n, int max_cap = 1, int quota = 1,
                                    int drop_percent = 0) {
  Rng rng(seed);
  std::vector<int> perm(n);
  for (int j = 0; j < n; ++j) perm[j] = j;
  rng.shuffle(perm);
  auto id = [&](int i, int j) { return "w" + std::to_string(i) + "f" + std::to_string(perm[j]); };
  std::vector<std::vector<bool>> kept(n, std::vector<bool>(n, true));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && rng.coin(drop_percent)) kept[i][j] = false;
  Builder b;
  std::vector<std::string> w_side, f_side;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> wp, fp;
    for (int k = 0; k < n; ++k) {
      int j = (i + k) % n;
      if (kept[i][j]) wp.push_back(id(i, j));
      int w = (i + 1 + k) % n;
      if (kept[w][i]) fp.push_back(id(w, i));
    }
    w_side.push_back("w" + std::to_string(i));
    f_side.push_back("f" + std::to_string(perm[i]));
    b.vertex(w_side.back(), quota, wp);
    b.vertex(f_side.back(), quota, fp);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (kept[i][j])
        b.edge(id(i, j), "w" + std::to_string(i), "f" + std::to_string(perm[j]), rng.uniform(1, max_cap));
  b.sides(w_side, f_side);
  return b.build();
}

/// Random quota instance on an arbitrary simple graph. With `cyclic_percent`,
/// that share of vertices ranks neighbour j by (j - i) mod n.
inline sppic::Instance random_general(std::uint64_t seed, int n = 4, int edge_percent = 60,
                                      int max_cap = 2, int max_quota = 2, int cyclic_percent = 0) {
  Rng rng(seed);
  std::map<std::string, std::vector<std::string>> stars;
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!rng.coin(edge_percent)) continue;
      std::string u = "v" + std::to_string(i), v = "v" + std::to_string(j);
      std::string id = u + v;
      edges.push_back({id, {u, v}});
      stars[u].push_back(id);
      stars[v].push_back(id);
    }
  if (edges.empty()) {
    edges.push_back({"v0v1", {"v0", "v1"}});
    stars["v0"].push_back("v0v1");
    stars["v1"].push_back("v0v1");
  }
  Builder b;
  std::map<std::string, int> quota;
  for (auto& [v, star] : stars) {
    rng.shuffle(star);
    quota[v] = rng.uniform(1, max_quota);
  }
  if (cyclic_percent > 0) {
    for (auto& [v, star] : stars) {
      if (!rng.coin(cyclic_percent)) continue;
      int i = std::stoi(v.substr(1));
      auto key = [&](const std::string& id) {
        std::string a = id.substr(0, id.find('v', 1)), c = id.substr(id.find('v', 1));
        int j = std::stoi((a == v ? c : a).substr(1));
        return (j - i + n) % n;
      };
      std::stable_sort(star.begin(), star.end(),
                       [&](const std::string& a, const std::string& c) { return key(a) < key(c); });
    }
  }
  for (const auto& [v, star] : stars) b.vertex(v, quota[v], star);
  for (const auto& [id, ends] : edges) b.edge(id, ends.first, ends.second, rng.uniform(1, max_cap));
  return b.build();
}

// Reference checks written directly from the definitions, sharing no code
// with the library beyond raw choice-function calls.

inline std::vector<int> star_of(const sppic::Instance& inst, const std::vector<int>& x,
                                std::size_t v) {
  std::vector<int> z;
  for (auto e : inst.graph().star(v)) z.push_back(x[e]);
  return z;
}

inline std::vector<int> call_cf(const sppic::Instance& inst, std::size_t v, const std::vector<int>& z) {
  auto c = inst.choice_function(v)->choose(std::span<const int>(z));
  return std::vector<int>(c.span().begin(), c.span().end());
}

inline bool reference_stable(const sppic::Instance& inst, const std::vector<int>& x) {
  const auto& g = inst.graph();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    auto z = star_of(inst, x, v);
    if (call_cf(inst, v, z) != z) return false;
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (x[e] >= inst.cap(e)) continue;
    bool both = true;
    for (auto v : g.edge(e).ends) {
      auto z = star_of(inst, x, v);
      std::size_t p = 0;
      while (g.star(v)[p] != e) ++p;
      ++z[p];
      if (call_cf(inst, v, z)[p] <= x[e]) both = false;
    }
    if (both) return false;
  }
  return true;
}

/// Full scan of the capacity box.
inline std::vector<std::vector<int>> reference_stable_set(const sppic::Instance& inst) {
  std::vector<std::vector<int>> out;
  std::vector<int> x(inst.edge_count(), 0);
  while (true) {
    if (reference_stable(inst, x)) out.push_back(x);
    std::size_t i = 0;
    while (i < x.size() && x[i] == inst.cap(i)) x[i++] = 0;
    if (i == x.size()) break;
    ++x[i];
  }
  return out;
}

inline std::vector<int> to_ints(const sppic::EdgeVector& x) {
  return std::vector<int>(x.span().begin(), x.span().end());
}

inline sppic::EdgeVector vec(const sppic::Instance& inst, const std::map<std::string, int>& vals) {
  sppic::EdgeVector x = inst.zero();
  for (const auto& [id, v] : vals) x[inst.graph().edge_by_id(id)] = v;
  return x;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) { return std::string(SPPIC_DATA_DIR) + "/" + name; }

}  // namespace fixtures
