#pragma once

#include <algorithm>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sppic/bipartite.hpp"
#include "sppic/edge_vector.hpp"
#include "sppic/error.hpp"
#include "sppic/instance.hpp"

namespace sppic {

/// Limits for exhaustive scans. `max_box` is checked against prod(b(e)+1)
/// before the scan starts (0 disables the check); `max_nodes` caps the
/// search tree actually visited.
struct EnumerationBudget {
  unsigned long long max_box = 2'000'000;
  unsigned long long max_nodes = 50'000'000;
  /// Prune partial assignments whose star is already unacceptable. Sound
  /// when every choice function satisfies (SUB): acceptable sets are then
  /// down-closed.
  bool assume_substitutable = true;
};

enum class EnumerationMode { bipartite, partnership };

namespace detail {

class MemoChoice {
 public:
  explicit MemoChoice(const Instance& inst) : inst_(inst), memo_(inst.vertex_count()) {}

  const EdgeVector& operator()(VertexIndex v, const EdgeVector& z) {
    auto& cache = memo_[v];
    auto it = cache.find(z);
    if (it != cache.end()) return it->second;
    return cache.emplace(z, inst_.oracle(v).raw(z)).first->second;
  }

 private:
  const Instance& inst_;
  std::vector<std::unordered_map<EdgeVector, EdgeVector, EdgeVectorHash>> memo_;
};

}  // namespace detail

/// Every stable vector of the instance, in increasing lexicographic order.
/// Depth-first over edges with acceptability checks on completed stars and
/// blocking checks on edges whose two stars are complete.
inline std::vector<EdgeVector> enumerate_stable(const Instance& inst,
                                                EnumerationMode mode = EnumerationMode::partnership,
                                                const EnumerationBudget& budget = {}) {
  if (mode == EnumerationMode::bipartite) require_bipartite(inst, "bipartite enumeration");
  const Graph& g = inst.graph();
  const std::size_t n = inst.vertex_count(), m = inst.edge_count();
  if (budget.max_box > 0 && Box(inst.caps()).size(budget.max_box) > budget.max_box)
    throw BudgetExceeded("capacity box exceeds the enumeration budget");

  // Edge order: repeatedly take the vertex with most edges already placed.
  std::vector<EdgeIndex> order;
  std::vector<char> placed(m, 0), visited(n, 0);
  for (std::size_t round = 0; round < n; ++round) {
    VertexIndex best = n;
    long best_score = -1;
    for (VertexIndex v = 0; v < n; ++v) {
      if (visited[v]) continue;
      long score = 0;
      for (EdgeIndex e : g.star(v)) score += placed[e] ? 2 : 0;
      score = score * 64 - static_cast<long>(g.star(v).size());
      if (best == n || score > best_score) best = v, best_score = score;
    }
    visited[best] = 1;
    for (EdgeIndex e : g.star(best))
      if (!placed[e]) placed[e] = 1, order.push_back(e);
  }
  // completes[d]: vertices whose star is fully assigned once order[0..d] is.
  std::vector<std::vector<VertexIndex>> completes(m);
  std::vector<long> done_at(n, -1);
  {
    std::vector<std::size_t> pos(m);
    for (std::size_t d = 0; d < m; ++d) pos[order[d]] = d;
    for (VertexIndex v = 0; v < n; ++v) {
      long last = -1;
      for (EdgeIndex e : g.star(v)) last = std::max(last, static_cast<long>(pos[e]));
      done_at[v] = last;
      if (last >= 0) completes[last].push_back(v);
    }
  }

  detail::MemoChoice memo(inst);
  auto acceptable = [&](const EdgeVector& x, VertexIndex v) {
    EdgeVector z = inst.restrict(x, v);
    return memo(v, z) == z;
  };
  auto interesting = [&](const EdgeVector& x, EdgeIndex e, VertexIndex v) {
    if (x[e] >= inst.cap(e)) return false;
    EdgeVector z = inst.restrict(x, v);
    std::size_t p = g.star_position(e, v);
    ++z[p];
    return memo(v, z)[p] > x[e];
  };

  std::vector<EdgeVector> out;
  EdgeVector x = inst.zero();
  // Isolated vertices: acceptability of the empty star.
  for (VertexIndex v = 0; v < n; ++v)
    if (done_at[v] < 0 && !acceptable(x, v)) return out;

  unsigned long long nodes = 0;
  auto descend = [&](auto&& self, std::size_t d) -> void {
    if (d == m) {
      out.push_back(x);
      return;
    }
    EdgeIndex e = order[d];
    for (int val = 0; val <= inst.cap(e); ++val) {
      if (++nodes > budget.max_nodes)
        throw BudgetExceeded("stable-set enumeration exceeded its node budget");
      x[e] = val;
      bool ok = true;
      if (budget.assume_substitutable)
        for (VertexIndex v : g.edge(e).ends)
          if (!acceptable(x, v)) ok = false;
      if (ok) {
        for (VertexIndex v : completes[d]) {
          if (!acceptable(x, v)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        for (VertexIndex v : completes[d]) {
          for (EdgeIndex f : g.star(v)) {
            VertexIndex u = g.other_end(f, v);
            if (done_at[u] > static_cast<long>(d)) continue;
            if (interesting(x, f, v) && interesting(x, f, u)) {
              ok = false;
              break;
            }
          }
          if (!ok) break;
        }
      }
      if (ok) self(self, d + 1);
      // Under (SUB) a larger value keeps the partial star unacceptable.
      if (!ok && budget.assume_substitutable) {
        bool star_bad = false;
        for (VertexIndex v : g.edge(e).ends)
          if (!acceptable(x, v)) star_bad = true;
        if (star_bad) break;
      }
    }
    x[e] = 0;
  };
  descend(descend, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// le[i][j]: stable[i] weakly precedes stable[j] in <_F.
inline std::vector<std::vector<char>> firm_order_matrix(const Instance& inst,
                                                        const std::vector<EdgeVector>& stable) {
  require_bipartite(inst, "firm order");
  std::vector<std::vector<char>> le(stable.size(), std::vector<char>(stable.size(), 0));
  for (std::size_t i = 0; i < stable.size(); ++i)
    for (std::size_t j = 0; j < stable.size(); ++j)
      le[i][j] = i == j || detail::weakly_precedes(inst, stable[i], stable[j], Side::F);
  return le;
}

struct LatticeExtremes {
  EdgeVector min, max;
};

/// The <_F-minimum and maximum of a stable set, after checking that every
/// pair has a least upper bound inside the set.
inline LatticeExtremes lattice_extremes(const Instance& inst, const std::vector<EdgeVector>& stable) {
  require_bipartite(inst, "lattice_extremes");
  if (stable.empty()) throw InputError("lattice_extremes: empty stable set");
  auto le = firm_order_matrix(inst, stable);
  const std::size_t n = stable.size();
  auto find_extreme = [&](bool minimum) -> std::size_t {
    std::size_t found = n;
    for (std::size_t i = 0; i < n; ++i) {
      bool all = true;
      for (std::size_t j = 0; j < n && all; ++j) all = minimum ? le[i][j] : le[j][i];
      if (all) {
        if (found != n) throw VerificationError("stable set has two extreme elements");
        found = i;
      }
    }
    if (found == n) throw VerificationError("stable set has no unique extreme element");
    return found;
  };
  std::size_t lo = find_extreme(true), hi = find_extreme(false);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      bool has_lub = false;
      for (std::size_t c = 0; c < n && !has_lub; ++c) {
        if (!le[a][c] || !le[b][c]) continue;
        bool least = true;
        for (std::size_t d = 0; d < n && least; ++d)
          if (le[a][d] && le[b][d] && !le[c][d]) least = false;
        has_lub = least;
      }
      if (!has_lub) throw VerificationError("stable set is not a lattice under <_F");
    }
  return {stable[lo], stable[hi]};
}

/// All y in the stable set covering x in <_F.
inline std::vector<EdgeVector> immediate_successors(const Instance& inst,
                                                    const std::vector<EdgeVector>& stable,
                                                    const EdgeVector& x) {
  require_bipartite(inst, "immediate_successors");
  auto it = std::find(stable.begin(), stable.end(), x);
  if (it == stable.end()) throw InputError("immediate_successors: x is not in the stable set");
  std::vector<EdgeVector> above;
  for (const auto& y : stable)
    if (y != x && detail::weakly_precedes(inst, x, y, Side::F)) above.push_back(y);
  std::vector<EdgeVector> out;
  for (const auto& y : above) {
    bool covered = true;
    for (const auto& z : above)
      if (z != y && detail::weakly_precedes(inst, z, y, Side::F)) covered = false;
    if (covered) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Covering pairs (i, j) of the stable set under <_F.
inline std::vector<std::pair<std::size_t, std::size_t>> stable_hasse_edges(
    const Instance& inst, const std::vector<EdgeVector>& stable) {
  auto le = firm_order_matrix(inst, stable);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = stable.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !le[i][j]) continue;
      bool cover = true;
      for (std::size_t k = 0; k < n && cover; ++k)
        if (k != i && k != j && le[i][k] && le[k][j]) cover = false;
      if (cover) out.emplace_back(i, j);
    }
  return out;
}

/// A +-1 difference of two stable vectors has the shape of an alternating
/// cycle: balanced signs at every vertex (positive edges leave W) and a
/// connected support.
inline bool is_alternating_cycle_vector(const Instance& inst, const EdgeVector& diff) {
  const Graph& g = inst.graph();
  std::vector<EdgeIndex> support;
  for (EdgeIndex e = 0; e < inst.edge_count(); ++e) {
    if (diff[e] < -1 || diff[e] > 1) return false;
    if (diff[e] != 0) support.push_back(e);
  }
  if (support.empty()) return false;
  for (VertexIndex v = 0; v < inst.vertex_count(); ++v) {
    int balance = 0;
    for (EdgeIndex e : g.star(v)) balance += diff[e];
    if (balance != 0) return false;
  }
  std::vector<char> reached(inst.vertex_count(), 0);
  std::vector<VertexIndex> stack{g.edge(support[0]).ends[0]};
  reached[stack[0]] = 1;
  while (!stack.empty()) {
    VertexIndex u = stack.back();
    stack.pop_back();
    for (EdgeIndex e : g.star(u)) {
      if (diff[e] == 0) continue;
      VertexIndex w = g.other_end(e, u);
      if (!reached[w]) reached[w] = 1, stack.push_back(w);
    }
  }
  for (EdgeIndex e : support)
    if (!reached[g.edge(e).ends[0]]) return false;
  return true;
}

}  // namespace sppic
