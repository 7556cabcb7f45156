#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sppic/edge_vector.hpp"
#include "sppic/error.hpp"
#include "sppic/instance.hpp"

namespace sppic {

// ---------------------------------------------------------------------------
// Stability

inline bool acceptable_at(const Instance& inst, const EdgeVector& x, VertexIndex v) {
  EdgeVector z = inst.restrict(x, v);
  return inst.oracle(v).raw(z) == z;
}

inline bool is_acceptable(const Instance& inst, const EdgeVector& x) {
  for (VertexIndex v = 0; v < inst.vertex_count(); ++v)
    if (!acceptable_at(inst, x, v)) return false;
  return true;
}

/// e is interesting for its end v under x (unit-increment test).
inline bool interesting_for(const Instance& inst, const EdgeVector& x, EdgeIndex e, VertexIndex v) {
  if (x[e] >= inst.cap(e)) return false;
  EdgeVector z = inst.restrict(x, v);
  std::size_t p = inst.graph().star_position(e, v);
  ++z[p];
  return inst.oracle(v).raw(z)[p] > x[e];
}

struct StabilityReport {
  bool stable = false;
  std::vector<VertexIndex> unacceptable;
  /// Filled only when x is acceptable everywhere.
  std::vector<EdgeIndex> blocking;
};

inline StabilityReport is_stable(const Instance& inst, const EdgeVector& x) {
  inst.require_in_box(x);
  StabilityReport r;
  for (VertexIndex v = 0; v < inst.vertex_count(); ++v)
    if (!acceptable_at(inst, x, v)) r.unacceptable.push_back(v);
  if (r.unacceptable.empty()) {
    for (EdgeIndex e = 0; e < inst.edge_count(); ++e) {
      const auto& ends = inst.graph().edge(e).ends;
      if (interesting_for(inst, x, e, ends[0]) && interesting_for(inst, x, e, ends[1]))
        r.blocking.push_back(e);
    }
  }
  r.stable = r.unacceptable.empty() && r.blocking.empty();
  return r;
}

/// Boolean stability test for vectors already known to lie in the box.
inline bool stable(const Instance& inst, const EdgeVector& x) {
  if (!is_acceptable(inst, x)) return false;
  for (EdgeIndex e = 0; e < inst.edge_count(); ++e) {
    const auto& ends = inst.graph().edge(e).ends;
    if (interesting_for(inst, x, e, ends[0]) && interesting_for(inst, x, e, ends[1])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Order relations

inline void require_bipartite(const Instance& inst, const char* what) {
  if (!inst.has_bipartition())
    throw InputError(std::string(what) + " needs an instance with bipartition labels");
}

namespace detail {

// x_f is (weakly) below y_f for the firm f: equal, or C_f(x_f v y_f) = y_f.
inline bool firm_weakly_below(const Instance& inst, const EdgeVector& x, const EdgeVector& y,
                              VertexIndex f) {
  EdgeVector xf = inst.restrict(x, f), yf = inst.restrict(y, f);
  return xf == yf || inst.oracle(f).raw(join(xf, yf)) == yf;
}

inline bool weakly_precedes(const Instance& inst, const EdgeVector& x, const EdgeVector& y,
                            Side side) {
  for (VertexIndex v = 0; v < inst.vertex_count(); ++v)
    if (inst.side(v) == side && !firm_weakly_below(inst, x, y, v)) return false;
  return true;
}

}  // namespace detail

/// Strict x <_F y: x != y and every firm weakly prefers y_f.
inline bool precedes_F(const Instance& inst, const EdgeVector& x, const EdgeVector& y) {
  require_bipartite(inst, "precedes_F");
  inst.require_in_box(x);
  inst.require_in_box(y);
  if (!is_acceptable(inst, x) || !is_acceptable(inst, y))
    throw InputError("precedes_F: both vectors must be acceptable");
  return x != y && detail::weakly_precedes(inst, x, y, Side::F);
}

/// Same relation on the worker side.
inline bool precedes_W(const Instance& inst, const EdgeVector& x, const EdgeVector& y) {
  require_bipartite(inst, "precedes_W");
  inst.require_in_box(x);
  inst.require_in_box(y);
  if (!is_acceptable(inst, x) || !is_acceptable(inst, y))
    throw InputError("precedes_W: both vectors must be acceptable");
  return x != y && detail::weakly_precedes(inst, x, y, Side::W);
}

// ---------------------------------------------------------------------------
// Deferred acceptance

/// Side W proposing yields x_min (best for W), side F yields x_max.
inline EdgeVector deferred_acceptance(const Instance& inst, Side proposers) {
  require_bipartite(inst, "deferred_acceptance");
  EdgeVector bound = inst.cap_vector();
  long guard = 1;
  for (int c : inst.caps()) guard += c;
  for (long round = 0; round <= guard; ++round) {
    EdgeVector offers = inst.zero();
    for (VertexIndex v = 0; v < inst.vertex_count(); ++v)
      if (inst.side(v) == proposers)
        inst.assign_star(offers, v, inst.oracle(v).raw(inst.restrict(bound, v)));
    bool rejected = false;
    for (VertexIndex v = 0; v < inst.vertex_count(); ++v) {
      if (inst.side(v) == proposers) continue;
      EdgeVector received = inst.restrict(offers, v);
      EdgeVector kept = inst.oracle(v).raw(received);
      auto star = inst.graph().star(v);
      for (std::size_t p = 0; p < star.size(); ++p) {
        if (kept[p] < received[p]) {
          bound[star[p]] = kept[p];
          rejected = true;
        }
      }
    }
    if (!rejected) {
      if (!stable(inst, offers))
        throw VerificationError("deferred acceptance produced an unstable vector");
      return offers;
    }
  }
  throw VerificationError("deferred acceptance did not converge");
}

// ---------------------------------------------------------------------------
// Rotations

struct RotationStep {
  VertexIndex tail;
  EdgeIndex edge;
  friend bool operator==(const RotationStep&, const RotationStep&) = default;
  friend auto operator<=>(const RotationStep&, const RotationStep&) = default;
};

/// Edge-simple closed walk alternating W->F (positive) and F->W (negative)
/// edges, stored in canonical form: the cyclic shift starting at the smallest
/// edge index.
class Rotation {
 public:
  Rotation() = default;

  static Rotation from_walk(const Instance& inst, std::vector<RotationStep> walk) {
    require_bipartite(inst, "rotation");
    const Graph& g = inst.graph();
    if (walk.size() < 2 || walk.size() % 2)
      throw InputError("a rotation needs an even number (>= 2) of steps");
    std::set<EdgeIndex> seen;
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const auto& s = walk[i];
      if (s.edge >= g.edge_count() || !g.incident(s.edge, s.tail))
        throw InputError("rotation step does not leave its tail vertex");
      if (!seen.insert(s.edge).second) throw InputError("rotation is not edge-simple");
      VertexIndex head = g.other_end(s.edge, s.tail);
      if (head != walk[(i + 1) % walk.size()].tail)
        throw InputError("rotation steps do not chain into a closed walk");
    }
    auto first = std::min_element(walk.begin(), walk.end(),
                                  [](const auto& a, const auto& b) { return a.edge < b.edge; });
    std::rotate(walk.begin(), first, walk.end());
    Rotation r;
    r.steps_ = std::move(walk);
    for (const auto& s : r.steps_) r.signs_.push_back(inst.side(s.tail) == Side::W ? 1 : -1);
    return r;
  }

  const std::vector<RotationStep>& steps() const { return steps_; }
  const std::vector<int>& signs() const { return signs_; }
  std::size_t length() const { return steps_.size(); }

  EdgeVector chi(std::size_t edge_count) const {
    EdgeVector c(edge_count);
    for (std::size_t i = 0; i < steps_.size(); ++i) c[steps_[i].edge] = signs_[i];
    return c;
  }

  std::vector<EdgeIndex> edges() const {
    std::vector<EdgeIndex> out;
    for (const auto& s : steps_) out.push_back(s.edge);
    return out;
  }
  std::set<EdgeIndex> edge_set() const {
    std::set<EdgeIndex> out;
    for (const auto& s : steps_) out.insert(s.edge);
    return out;
  }
  int sign_of(EdgeIndex e) const {
    for (std::size_t i = 0; i < steps_.size(); ++i)
      if (steps_[i].edge == e) return signs_[i];
    return 0;
  }

  friend bool operator==(const Rotation& a, const Rotation& b) { return a.steps_ == b.steps_; }
  friend auto operator<=>(const Rotation& a, const Rotation& b) { return a.steps_ <=> b.steps_; }

 private:
  std::vector<RotationStep> steps_;
  std::vector<int> signs_;
};

inline bool edge_disjoint(const Rotation& a, const Rotation& b) {
  auto sa = a.edge_set();
  for (const auto& s : b.steps())
    if (sa.count(s.edge)) return false;
  return true;
}

inline constexpr std::size_t kMaxRotationCandidates = 500'000;

namespace detail {

inline VertexIndex end_on_side(const Instance& inst, EdgeIndex e, Side side) {
  const auto& ends = inst.graph().edge(e).ends;
  return inst.side(ends[0]) == side ? ends[0] : ends[1];
}

// Firm link of a positive edge e = wf: the edge e' with
// C_f(x_f + 1^e) = x_f + 1^e - 1^e', when e is interesting for f.
inline std::optional<EdgeIndex> firm_link(const Instance& inst, const EdgeVector& x, EdgeIndex e) {
  if (x[e] >= inst.cap(e)) return std::nullopt;
  VertexIndex f = end_on_side(inst, e, Side::F);
  auto star = inst.graph().star(f);
  EdgeVector up = inst.restrict(x, f);
  std::size_t p = inst.graph().star_position(e, f);
  ++up[p];
  EdgeVector r = inst.oracle(f).raw(up);
  if (r[p] != up[p]) return std::nullopt;
  std::optional<EdgeIndex> dropped;
  for (std::size_t q = 0; q < star.size(); ++q) {
    if (r[q] == up[q]) continue;
    if (q == p || r[q] != up[q] - 1 || dropped) return std::nullopt;
    dropped = star[q];
  }
  return dropped;
}

// Swap relation C_v(z + 1^in) = z + 1^in - 1^out on a full vector z.
inline bool swaps(const Instance& inst, const EdgeVector& z, VertexIndex v, EdgeIndex in,
                  EdgeIndex out) {
  if (z[in] >= inst.cap(in)) return false;
  EdgeVector up = inst.restrict(z, v);
  ++up[inst.graph().star_position(in, v)];
  EdgeVector expect = up;
  std::size_t q = inst.graph().star_position(out, v);
  if (expect[q] == 0) return false;
  --expect[q];
  return inst.oracle(v).raw(up) == expect;
}

}  // namespace detail

/// Increasing rotations applicable to the stable vector x.
///
/// Firm links are computed exactly. Worker links are generated as candidates
/// (any positive-capable edge at the worker) and each closed alternating walk
/// is kept only if x + chi is stable, every worker link satisfies
/// C_w(x'_w + 1^e) = x'_w + 1^e - 1^e'' at x' = x + chi, x <_F x', and x' is
/// <_F-minimal among the surviving candidates.
inline std::vector<Rotation> find_rotations(const Instance& inst, const EdgeVector& x,
                                            std::size_t max_candidates = kMaxRotationCandidates) {
  require_bipartite(inst, "find_rotations");
  inst.require_in_box(x);
  if (!stable(inst, x)) throw InputError("find_rotations: vector is not stable");
  const Graph& g = inst.graph();
  const std::size_t m = inst.edge_count();

  std::vector<std::optional<EdgeIndex>> flink(m);
  for (EdgeIndex e = 0; e < m; ++e) flink[e] = detail::firm_link(inst, x, e);
  std::vector<std::vector<EdgeIndex>> next_positive(inst.vertex_count());
  for (EdgeIndex e = 0; e < m; ++e)
    if (flink[e]) next_positive[detail::end_on_side(inst, e, Side::W)].push_back(e);

  std::vector<std::vector<RotationStep>> walks;
  std::vector<char> used(m, 0);
  std::vector<RotationStep> path;
  std::size_t explored = 0;

  // Positive edge `e` is appended; the walk must return to `start`, the
  // smallest positive edge of the cycle.
  auto dfs = [&](auto&& self, EdgeIndex start, EdgeIndex e) -> void {
    if (++explored > max_candidates)
      throw BudgetExceeded("rotation candidate search exceeded its budget");
    EdgeIndex neg = *flink[e];
    if (used[neg]) return;
    VertexIndex w = detail::end_on_side(inst, e, Side::W);
    VertexIndex f = g.other_end(e, w);
    VertexIndex w2 = g.other_end(neg, f);
    used[e] = used[neg] = 1;
    path.push_back({w, e});
    path.push_back({f, neg});
    for (EdgeIndex e2 : next_positive[w2]) {
      if (e2 == neg) continue;
      if (e2 == start) {
        walks.push_back(path);
      } else if (e2 > start && !used[e2]) {
        self(self, start, e2);
      }
    }
    path.pop_back();
    path.pop_back();
    used[e] = used[neg] = 0;
  };
  for (EdgeIndex s = 0; s < m; ++s)
    if (flink[s]) dfs(dfs, s, s);

  struct Candidate {
    Rotation rotation;
    EdgeVector target;
  };
  std::vector<Candidate> valid;
  std::set<EdgeVector> seen_targets;
  for (auto& walk : walks) {
    EdgeVector y = x;
    bool in_box = true;
    for (std::size_t i = 0; i < walk.size(); ++i) {
      y[walk[i].edge] += (i % 2 == 0) ? 1 : -1;
      if (y[walk[i].edge] < 0 || y[walk[i].edge] > inst.cap(walk[i].edge)) in_box = false;
    }
    if (!in_box || seen_targets.count(y)) continue;
    bool links_ok = true;
    for (std::size_t i = 1; i < walk.size() && links_ok; i += 2) {
      EdgeIndex neg = walk[i].edge;
      EdgeIndex pos = walk[(i + 1) % walk.size()].edge;
      VertexIndex w = walk[(i + 1) % walk.size()].tail;
      links_ok = detail::swaps(inst, y, w, neg, pos);
    }
    if (!links_ok || !stable(inst, y) || !detail::weakly_precedes(inst, x, y, Side::F)) continue;
    seen_targets.insert(y);
    valid.push_back({Rotation::from_walk(inst, std::move(walk)), std::move(y)});
  }

  std::vector<Rotation> out;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < valid.size() && minimal; ++j)
      if (j != i && detail::weakly_precedes(inst, valid[j].target, valid[i].target, Side::F))
        minimal = false;
    if (minimal) out.push_back(valid[i].rotation);
  }
  std::sort(out.begin(), out.end());

  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (!edge_disjoint(out[i], out[j]))
        throw VerificationError("applicable rotations share an edge");
  return out;
}

/// Largest lambda with x + i*chi stable for i = 1..lambda.
inline int max_feasible_weight(const Instance& inst, const EdgeVector& x, const Rotation& r) {
  EdgeVector chi = r.chi(inst.edge_count());
  EdgeVector y = x;
  int lambda = 0;
  while (true) {
    y += chi;
    if (!inst.in_box(y) || !stable(inst, y)) break;
    ++lambda;
  }
  if (lambda == 0) throw InputError("rotation is not applicable to this vector");
  return lambda;
}

inline EdgeVector apply_rotation(const Instance& inst, const EdgeVector& x, const Rotation& r,
                                 int lambda) {
  if (lambda <= 0) throw InputError("rotation weight must be positive");
  EdgeVector y = x + lambda * r.chi(inst.edge_count());
  if (!inst.in_box(y)) throw InputError("rotation application leaves the capacity box");
  if (lambda > max_feasible_weight(inst, x, r))
    throw InputError("rotation weight exceeds the maximal feasible weight");
  return y;
}

// ---------------------------------------------------------------------------
// Routes

/// Seeded choice among n candidates; seed 0 always takes the first
/// (canonical) candidate.
class TieBreak {
 public:
  explicit TieBreak(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  std::size_t pick(std::size_t n) {
    if (n == 0) throw InternalError("TieBreak::pick on an empty set");
    if (seed_ == 0) return 0;
    return static_cast<std::size_t>(rng_() % n);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

struct RouteStep {
  Rotation rotation;
  int weight = 0;
  /// tau_R at `from`.
  int max_weight = 0;
  EdgeVector from, to;
};

struct Route {
  EdgeVector start, end;
  std::vector<RouteStep> steps;
  bool non_excessive = false;
  bool principal = false;
  bool full = false;
};

/// Recomputes the non-excessive and principal flags from the steps.
inline void classify_route(Route& route) {
  route.principal = std::all_of(route.steps.begin(), route.steps.end(),
                                [](const RouteStep& s) { return s.weight == s.max_weight; });
  route.non_excessive = true;
  for (std::size_t i = 0; i < route.steps.size(); ++i)
    for (std::size_t j = i + 1; j < route.steps.size(); ++j)
      if (route.steps[i].rotation == route.steps[j].rotation &&
          route.steps[i].weight != route.steps[i].max_weight)
        route.non_excessive = false;
}

inline std::size_t route_step_bound(const Instance& inst) {
  return static_cast<std::size_t>(inst.b_max()) * inst.edge_count() / 2 + 1;
}

/// Principal route from x_min to x_max, choosing among applicable rotations
/// with the seeded tie-break and applying each with its maximal weight.
inline Route build_full_route(const Instance& inst, std::uint64_t seed = 0) {
  require_bipartite(inst, "build_full_route");
  Route route;
  route.start = deferred_acceptance(inst, Side::W);
  EdgeVector x_max = deferred_acceptance(inst, Side::F);
  TieBreak tie(seed);
  EdgeVector x = route.start;
  const std::size_t bound = route_step_bound(inst);
  while (true) {
    auto rotations = find_rotations(inst, x);
    if (rotations.empty()) break;
    if (route.steps.size() >= bound)
      throw VerificationError("full route exceeds b_max*|E|/2 steps");
    const Rotation& r = rotations[tie.pick(rotations.size())];
    RouteStep step;
    step.rotation = r;
    step.max_weight = max_feasible_weight(inst, x, r);
    step.weight = step.max_weight;
    step.from = x;
    x = x + step.weight * r.chi(inst.edge_count());
    step.to = x;
    route.steps.push_back(std::move(step));
  }
  route.end = x;
  if (x != x_max) throw VerificationError("full route does not end at x_max");
  classify_route(route);
  route.full = route.principal;
  return route;
}

}  // namespace sppic
