#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sppic/bipartite.hpp"
#include "sppic/edge_vector.hpp"
#include "sppic/error.hpp"
#include "sppic/instance.hpp"
#include "sppic/symmetric.hpp"

namespace sppic {

/// Closed walk (v_0, e_1, v_1, ..., e_k, v_k = v_0) with k odd.
struct OddCycle {
  std::vector<VertexIndex> vertices;  // k + 1 entries, last == first
  std::vector<EdgeIndex> edges;       // k entries; edges[i] joins vertices[i], vertices[i+1]

  std::size_t length() const { return edges.size(); }

  static OddCycle from_walk(const Instance& inst, std::vector<VertexIndex> vertices,
                            std::vector<EdgeIndex> edges) {
    const Graph& g = inst.graph();
    if (edges.empty() || vertices.size() != edges.size() + 1)
      throw InputError("cycle walk must alternate vertices and edges");
    if (vertices.front() != vertices.back()) throw InputError("cycle walk is not closed");
    if (edges.size() % 2 == 0) throw InputError("cycle has an even number of edges");
    std::set<EdgeIndex> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!seen.insert(edges[i]).second) throw InputError("cycle is not edge-simple");
      const auto& ends = g.edge(edges[i]).ends;
      bool fits = (ends[0] == vertices[i] && ends[1] == vertices[i + 1]) ||
                  (ends[1] == vertices[i] && ends[0] == vertices[i + 1]);
      if (!fits) throw InputError("cycle walk uses an edge between the wrong vertices");
    }
    return OddCycle{std::move(vertices), std::move(edges)};
  }

  /// Direction-insensitive identity: the smaller of the two edge sequences
  /// that start at the smallest edge.
  std::vector<EdgeIndex> canonical_edges() const {
    auto rotated = [](std::vector<EdgeIndex> seq) {
      std::rotate(seq.begin(), std::min_element(seq.begin(), seq.end()), seq.end());
      return seq;
    };
    std::vector<EdgeIndex> fwd = rotated(edges);
    std::vector<EdgeIndex> rev(edges.rbegin(), edges.rend());
    rev = rotated(rev);
    return std::min(fwd, rev);
  }

  std::set<EdgeIndex> edge_set() const { return {edges.begin(), edges.end()}; }
};

inline bool same_cycle_set(const std::vector<OddCycle>& a, const std::vector<OddCycle>& b) {
  std::set<std::vector<EdgeIndex>> sa, sb;
  for (const auto& k : a) sa.insert(k.canonical_edges());
  for (const auto& k : b) sb.insert(k.canonical_edges());
  return sa == sb;
}

struct HalfPartnership {
  EdgeVector x;
  std::vector<OddCycle> K;
};

/// The data needed at one vertex by the half-partnership conditions.
struct VertexContext {
  VertexIndex v = 0;
  std::vector<std::size_t> cycles;  // indices into K of cycles passing v
  std::vector<EdgeVector> delta_in, delta_out;
  EdgeVector x_in, x_out;
  /// (entering, leaving) edge pairs at v, per cycle.
  std::vector<std::vector<std::pair<EdgeIndex, EdgeIndex>>> pairs;
};

inline VertexContext vertex_context(const Instance& inst, const HalfPartnership& hp, VertexIndex v) {
  const Graph& g = inst.graph();
  VertexContext ctx;
  ctx.v = v;
  ctx.x_in = inst.restrict(hp.x, v);
  ctx.x_out = ctx.x_in;
  for (std::size_t c = 0; c < hp.K.size(); ++c) {
    const OddCycle& k = hp.K[c];
    EdgeVector din(g.star(v).size()), dout(g.star(v).size());
    std::vector<std::pair<EdgeIndex, EdgeIndex>> pairs;
    const std::size_t len = k.length();
    for (std::size_t i = 0; i < len; ++i) {
      if (k.vertices[i + 1] != v) continue;
      EdgeIndex in = k.edges[i], out = k.edges[(i + 1) % len];
      ++din[g.star_position(in, v)];
      ++dout[g.star_position(out, v)];
      pairs.emplace_back(in, out);
    }
    if (pairs.empty()) continue;
    ctx.cycles.push_back(c);
    ctx.x_in += din;
    ctx.x_out += dout;
    ctx.delta_in.push_back(std::move(din));
    ctx.delta_out.push_back(std::move(dout));
    ctx.pairs.push_back(std::move(pairs));
  }
  return ctx;
}

struct Violation {
  std::string condition;  // in_unacceptable, out_unacceptable, cycle_exchange, cycle_step, blocking_forward/backward
  VertexIndex vertex = 0;
  std::optional<EdgeIndex> edge;
  std::optional<std::size_t> cycle;
};

struct VerificationReport {
  bool ok = false;
  std::vector<Violation> violations;
};

/// Checks acceptability, the cycle conditions and blocking, with base
/// choice-function calls only.
inline VerificationReport verify_half_partnership(const Instance& inst, const HalfPartnership& hp) {
  const Graph& g = inst.graph();
  inst.require_in_box(hp.x);
  for (std::size_t i = 0; i < hp.K.size(); ++i) {
    if (hp.K[i].length() % 2 == 0) throw InputError("half-partnership cycle is not odd");
    for (std::size_t j = i + 1; j < hp.K.size(); ++j) {
      auto si = hp.K[i].edge_set();
      for (EdgeIndex e : hp.K[j].edges)
        if (si.count(e)) throw InputError("half-partnership cycles share an edge");
    }
  }
  VerificationReport rep;
  auto violate = [&](std::string what, VertexIndex v, std::optional<EdgeIndex> e,
                     std::optional<std::size_t> c) { rep.violations.push_back({std::move(what), v, e, c}); };
  std::vector<VertexContext> ctx;
  for (VertexIndex v = 0; v < inst.vertex_count(); ++v) {
    ctx.push_back(vertex_context(inst, hp, v));
    const VertexContext& c = ctx.back();
    const ChoiceOracle& cf = inst.oracle(v);
    if (!cf.box().contains(c.x_in) || !cf.box().contains(c.x_out))
      throw InputError("x_in or x_out leaves the box at vertex '" + g.vertex_id(v) + "'");
    if (c.cycles.empty()) {
      // With no cycle through v the conditions reduce to acceptability of x_v.
      if (cf.raw(c.x_in) != c.x_in) violate("in_unacceptable", v, std::nullopt, std::nullopt);
      continue;
    }
    if (cf.raw(c.x_in) != c.x_in) violate("in_unacceptable", v, std::nullopt, std::nullopt);
    if (cf.raw(c.x_out) != c.x_out) violate("out_unacceptable", v, std::nullopt, std::nullopt);
    for (std::size_t j = 0; j < c.cycles.size(); ++j) {
      EdgeVector up = c.x_out + c.delta_in[j];
      if (!cf.box().contains(up) || cf.raw(up) != up - c.delta_out[j])
        violate("cycle_exchange", v, std::nullopt, c.cycles[j]);
      for (auto [e, e2] : c.pairs[j]) {
        EdgeVector z = c.x_out;
        ++z[g.star_position(e, v)];
        EdgeVector expect = z;
        --expect[g.star_position(e2, v)];
        if (!cf.box().contains(z) || cf.raw(z) != expect) violate("cycle_step", v, e, c.cycles[j]);
      }
    }
  }
  // Blocking, once per orientation (u, v) of each edge: the unit offered along
  // u -> v must be rejected by u at x_in or by v at x_out.
  auto rejects = [&](VertexIndex w, const EdgeVector& base, EdgeIndex e) {
    EdgeVector z = base;
    ++z[g.star_position(e, w)];
    return inst.oracle(w).raw(z) == base;
  };
  for (EdgeIndex e = 0; e < inst.edge_count(); ++e) {
    if (hp.x[e] >= inst.cap(e)) continue;
    const auto& ends = g.edge(e).ends;
    for (int k = 0; k < 2; ++k) {
      VertexIndex u = ends[k], v = ends[1 - k];
      int t = ctx[u].x_in[g.star_position(e, u)];
      if (t >= inst.cap(e)) continue;
      if (!rejects(u, ctx[u].x_in, e) && !rejects(v, ctx[v].x_out, e))
        violate(k == 0 ? "blocking_forward" : "blocking_backward", u, e, std::nullopt);
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

/// nu(R): the odd base cycle traced by the positive edges of a singular
/// rotation, each positive copy u^0v^1 read as u -> v.
inline OddCycle project_cycle(const SymmetricInstance& si, const Rotation& r) {
  const auto& steps = r.steps();
  const std::size_t len = steps.size();
  std::map<EdgeIndex, std::size_t> pos;
  for (std::size_t i = 0; i < len; ++i) pos[steps[i].edge] = i;
  std::size_t start = r.signs()[0] > 0 ? 0 : 1;
  std::vector<VertexIndex> vertices;
  std::vector<EdgeIndex> edges;
  std::size_t i = start;
  do {
    EdgeIndex pe = steps[i].edge;
    VertexIndex u = si.worker_end(pe);
    edges.push_back(si.base_edge(pe));
    vertices.push_back(u);
    EdgeIndex next_neg = steps[(i + 1) % len].edge;
    auto it = pos.find(si.sigma_edge(next_neg));
    if (it == pos.end() || r.signs()[it->second] < 0)
      throw VerificationError("singular rotation has no mirrored positive edge");
    i = it->second;
    if (edges.size() > len) throw VerificationError("cycle projection does not close");
  } while (i != start);
  if (edges.size() * 2 != len) throw VerificationError("projected cycle misses positive edges of the rotation");
  vertices.push_back(vertices.front());
  try {
    return OddCycle::from_walk(si.base(), std::move(vertices), std::move(edges));
  } catch (const InputError& err) {
    throw VerificationError(std::string("projected cycle is malformed: ") + err.what());
  }
}

/// (x, K) from a QB outcome taken with lower choices.
inline HalfPartnership project_solution(const SymmetricInstance& si, const QBOutcome& out) {
  const Instance& base = si.base();
  HalfPartnership hp;
  hp.x = base.zero();
  std::set<EdgeIndex> covered;
  for (const auto& r : out.singular_odd)
    for (const auto& s : r.steps()) covered.insert(si.base_edge(s.edge));
  for (EdgeIndex e = 0; e < base.edge_count(); ++e) {
    const auto& ends = base.graph().edge(e).ends;
    int a = out.x_tilde[si.copy_from(e, ends[0])], b = out.x_tilde[si.copy_from(e, ends[1])];
    hp.x[e] = std::min(a, b);
    int gap = std::abs(a - b);
    if (gap != (covered.count(e) ? 1 : 0))
      throw VerificationError("copy values of edge '" + base.graph().edge(e).id +
                              "' differ by " + std::to_string(gap));
  }
  for (const auto& r : out.singular_odd) hp.K.push_back(project_cycle(si, r));
  for (std::size_t i = 0; i < hp.K.size(); ++i)
    for (std::size_t j = i + 1; j < hp.K.size(); ++j) {
      auto s = hp.K[i].edge_set();
      for (EdgeIndex e : hp.K[j].edges)
        if (s.count(e)) throw VerificationError("projected cycles share an edge");
    }
  return hp;
}

struct Solution {
  HalfPartnership hp;
  bool solvable = false;
  QBOutcome qb;
};

inline std::string describe(const Instance& inst, const Violation& v) {
  std::string s = v.condition + " at '" + inst.graph().vertex_id(v.vertex) + "'";
  if (v.edge) s += " edge '" + inst.graph().edge(*v.edge).id + "'";
  return s;
}

inline Solution solve(const Instance& inst, std::uint64_t seed = 0) {
  SymmetricInstance si = symmetrize(inst);
  Solution sol;
  sol.qb = run_qb(si, seed);
  sol.hp = project_solution(si, sol.qb);
  auto rep = verify_half_partnership(inst, sol.hp);
  if (!rep.ok) throw VerificationError("solver output fails " + describe(inst, rep.violations.front()));
  sol.solvable = sol.hp.K.empty();
  if (sol.solvable && !stable(inst, sol.hp.x))
    throw VerificationError("solver reports a stable partnership that is not stable");
  return sol;
}

/// mu(K): the 2k-cycle e_1^1, e_2^0, ..., e_k^1, e_1^0, ..., e_k^0 in the
/// symmetric graph, where e_i^1 = v_{i-1}^0 v_i^1 and e_i^0 = v_{i-1}^1 v_i^0.
inline Rotation lift_cycle(const SymmetricInstance& si, const OddCycle& k) {
  const std::size_t len = k.length();
  std::vector<RotationStep> walk;
  for (std::size_t j = 0; j < 2 * len; ++j) {
    std::size_t i = j % len;
    int parity = static_cast<int>(j % 2);  // 0: W -> F step
    VertexIndex from = k.vertices[i], to = k.vertices[i + 1];
    EdgeIndex e = k.edges[i];
    if (parity == 0)
      walk.push_back({si.vertex_copy(from, 0), si.copy_from(e, from)});
    else
      walk.push_back({si.vertex_copy(from, 1), si.copy_from(e, to)});
  }
  return Rotation::from_walk(si.sym(), std::move(walk));
}

/// Symmetric-instance vector of a half-partnership: both copies carry x(e)
/// off K; along a K-cycle traversed u -> v, u^0v^1 carries x(e) and v^0u^1
/// carries x(e) + 1.
inline EdgeVector lift_solution(const SymmetricInstance& si, const HalfPartnership& hp) {
  EdgeVector xt = si.lift_symmetric(hp.x);
  for (const auto& k : hp.K)
    for (std::size_t i = 0; i < k.length(); ++i) {
      EdgeIndex e = k.edges[i];
      xt[si.copy_from(e, k.vertices[i + 1])] = hp.x[e] + 1;
    }
  return xt;
}

}  // namespace sppic
