#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sppic/bipartite.hpp"
#include "sppic/edge_vector.hpp"
#include "sppic/error.hpp"
#include "sppic/instance.hpp"

namespace sppic {

/// One use of a rotation; `ordinal` counts earlier uses of the same rotation.
struct Occurrence {
  Rotation rotation;
  int ordinal = 0;
  int weight = 0;
};

using OccurrenceKey = std::pair<Rotation, int>;

class RotationFamily {
 public:
  RotationFamily() = default;

  std::size_t add(Rotation r, int weight) {
    int ordinal = uses_[r]++;
    OccurrenceKey key{r, ordinal};
    index_.emplace(key, items_.size());
    items_.push_back({std::move(r), ordinal, weight});
    return items_.size() - 1;
  }

  const std::vector<Occurrence>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  const Occurrence& operator[](std::size_t i) const { return items_.at(i); }
  bool empty() const { return items_.empty(); }

  std::optional<std::size_t> find(const Rotation& r, int ordinal) const {
    auto it = index_.find({r, ordinal});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int uses(const Rotation& r) const {
    auto it = uses_.find(r);
    return it == uses_.end() ? 0 : it->second;
  }
  std::vector<int> weights() const {
    std::vector<int> out;
    for (const auto& o : items_) out.push_back(o.weight);
    return out;
  }

  /// Sum of weight * chi over all occurrences.
  EdgeVector total(std::size_t edge_count) const {
    EdgeVector s(edge_count);
    for (const auto& o : items_) s += o.weight * o.rotation.chi(edge_count);
    return s;
  }

  /// Same occurrences with the same weights, regardless of listing order.
  friend bool same_family(const RotationFamily& a, const RotationFamily& b) {
    if (a.size() != b.size()) return false;
    for (const auto& o : a.items_) {
      auto j = b.find(o.rotation, o.ordinal);
      if (!j || b[*j].weight != o.weight) return false;
    }
    return true;
  }

 private:
  std::vector<Occurrence> items_;
  std::map<OccurrenceKey, std::size_t> index_;
  std::map<Rotation, int> uses_;
};

inline RotationFamily family_from_route(const Route& route) {
  if (!route.full) throw InputError("family_from_route needs a full route");
  RotationFamily family;
  for (const auto& s : route.steps) family.add(s.rotation, s.weight);
  return family;
}

inline constexpr std::size_t kDefaultStateBudget = 200'000;

/// Principal stable vectors reachable from x_min by applying rotations with
/// maximal weight, with the occurrences used to reach each of them.
struct StateGraph {
  struct Arc {
    std::size_t target;
    std::size_t occurrence;
  };
  RotationFamily family;
  std::vector<EdgeVector> states;
  /// used[s][i]: occurrence i has been applied on the way to state s.
  std::vector<std::vector<char>> used;
  std::vector<std::vector<Arc>> arcs;
  std::size_t start = 0, end = 0;
};

inline StateGraph explore_states(const Instance& inst, std::size_t max_states = kDefaultStateBudget) {
  require_bipartite(inst, "explore_states");
  StateGraph sg;
  Route canonical = build_full_route(inst, 0);
  sg.family = family_from_route(canonical);
  const std::size_t m = inst.edge_count(), k = sg.family.size();

  std::unordered_map<EdgeVector, std::size_t, EdgeVectorHash> id_of;
  auto intern = [&](const EdgeVector& x, std::vector<char> used) -> std::pair<std::size_t, bool> {
    auto it = id_of.find(x);
    if (it != id_of.end()) {
      if (sg.used[it->second] != used)
        throw VerificationError("two principal routes reach one vector with different rotation sets");
      return {it->second, false};
    }
    if (sg.states.size() >= max_states)
      throw BudgetExceeded("principal state exploration exceeded its budget");
    id_of.emplace(x, sg.states.size());
    sg.states.push_back(x);
    sg.used.push_back(std::move(used));
    sg.arcs.emplace_back();
    return {sg.states.size() - 1, true};
  };

  sg.start = intern(canonical.start, std::vector<char>(k, 0)).first;
  std::vector<std::size_t> queue{sg.start};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t s = queue[head];
    EdgeVector x = sg.states[s];
    std::vector<char> used = sg.used[s];
    for (const Rotation& r : find_rotations(inst, x)) {
      int ordinal = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (used[i] && sg.family[i].rotation == r) ++ordinal;
      auto occ = sg.family.find(r, ordinal);
      if (!occ) throw VerificationError("a full route uses a rotation outside the canonical family");
      int tau = max_feasible_weight(inst, x, r);
      if (tau != sg.family[*occ].weight)
        throw VerificationError("rotation weight differs between full routes");
      std::vector<char> next_used = used;
      next_used[*occ] = 1;
      auto [t, fresh] = intern(x + tau * r.chi(m), std::move(next_used));
      sg.arcs[s].push_back({t, *occ});
      if (fresh) queue.push_back(t);
    }
  }
  auto last = id_of.find(canonical.end);
  if (last == id_of.end()) throw InternalError("x_max missing from the state graph");
  sg.end = last->second;
  for (std::size_t s = 0; s < sg.states.size(); ++s)
    if (sg.arcs[s].empty() && s != sg.end)
      throw VerificationError("a principal route gets stuck before x_max");
  return sg;
}

struct RotationOrder {
  RotationFamily family;
  /// less[i][j]: occurrence i is used before occurrence j in every full route.
  std::vector<std::vector<char>> less;

  bool precedes(std::size_t i, std::size_t j) const { return less.at(i).at(j) != 0; }
  std::vector<int> tau() const { return family.weights(); }

  std::vector<std::pair<std::size_t, std::size_t>> hasse() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = less.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!less[i][j]) continue;
        bool cover = true;
        for (std::size_t k = 0; k < n && cover; ++k)
          if (less[i][k] && less[k][j]) cover = false;
        if (cover) out.emplace_back(i, j);
      }
    return out;
  }
};

inline RotationOrder order_from_states(const StateGraph& sg) {
  const std::size_t k = sg.family.size();
  RotationOrder order;
  order.family = sg.family;
  order.less.assign(k, std::vector<char>(k, 1));
  for (std::size_t i = 0; i < k; ++i) order.less[i][i] = 0;
  for (const auto& used : sg.used)
    for (std::size_t j = 0; j < k; ++j)
      if (used[j])
        for (std::size_t i = 0; i < k; ++i)
          if (!used[i]) order.less[i][j] = 0;
  return order;
}

/// The order on rotation occurrences over all full routes.
inline RotationOrder rotation_order(const Instance& inst, std::size_t max_states = kDefaultStateBudget) {
  return order_from_states(explore_states(inst, max_states));
}

/// Every full route as a sequence of occurrence indices.
inline std::vector<std::vector<std::size_t>> enumerate_full_routes(const StateGraph& sg,
                                                                   std::size_t max_routes) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  auto dfs = [&](auto&& self, std::size_t s) -> void {
    if (s == sg.end) {
      if (out.size() >= max_routes) throw BudgetExceeded("full-route enumeration exceeded its budget");
      out.push_back(path);
      return;
    }
    for (const auto& a : sg.arcs[s]) {
      path.push_back(a.occurrence);
      self(self, a.target);
      path.pop_back();
    }
  };
  dfs(dfs, sg.start);
  return out;
}

using ClosedFunction = std::vector<int>;

inline bool is_closed(const RotationOrder& order, const ClosedFunction& lam) {
  const auto tau = order.tau();
  if (lam.size() != tau.size()) throw InputError("closed function has the wrong number of entries");
  for (std::size_t i = 0; i < lam.size(); ++i)
    if (lam[i] < 0 || lam[i] > tau[i]) throw InputError("closed function entry outside [0, tau]");
  for (std::size_t i = 0; i < lam.size(); ++i)
    for (std::size_t j = 0; j < lam.size(); ++j)
      if (order.less[i][j] && lam[j] > 0 && lam[i] != tau[i]) return false;
  return true;
}

/// phi(x): weights of a non-excessive route from x_min to x that never leaves
/// the <_F-down-set of x.
inline ClosedFunction closed_from_vector(const Instance& inst, const RotationOrder& order,
                                         const EdgeVector& x) {
  require_bipartite(inst, "closed_from_vector");
  inst.require_in_box(x);
  if (!stable(inst, x)) throw InputError("closed_from_vector: vector is not stable");
  const std::size_t m = inst.edge_count();
  const RotationFamily& fam = order.family;
  ClosedFunction lam(fam.size(), 0);
  std::map<Rotation, int> completed;
  EdgeVector y = deferred_acceptance(inst, Side::W);
  if (!detail::weakly_precedes(inst, y, x, Side::F))
    throw VerificationError("x_min is not below the given stable vector");
  const std::size_t bound = route_step_bound(inst) + fam.size() + 1;
  for (std::size_t step = 0; y != x; ++step) {
    if (step > bound) throw VerificationError("phi reconstruction does not terminate");
    bool moved = false;
    for (const Rotation& r : find_rotations(inst, y)) {
      auto occ = fam.find(r, completed[r]);
      if (!occ) throw VerificationError("phi reconstruction left the rotation family");
      int remaining = fam[*occ].weight - lam[*occ];
      int tau = max_feasible_weight(inst, y, r);
      if (tau != remaining) throw VerificationError("rotation weight inconsistent with the family");
      EdgeVector chi = r.chi(m);
      int lambda = 0;
      EdgeVector z = y;
      while (lambda < tau) {
        z += chi;
        if (!detail::weakly_precedes(inst, z, x, Side::F)) break;
        ++lambda;
      }
      if (lambda == 0) continue;
      y += lambda * chi;
      lam[*occ] += lambda;
      if (lam[*occ] == fam[*occ].weight) ++completed[r];
      moved = true;
      break;
    }
    if (!moved) throw VerificationError("phi reconstruction got stuck below x");
  }
  EdgeVector check = deferred_acceptance(inst, Side::W);
  for (std::size_t i = 0; i < fam.size(); ++i) check += lam[i] * fam[i].rotation.chi(m);
  if (check != x) throw VerificationError("phi reconstruction mismatch");
  if (!is_closed(order, lam)) throw VerificationError("phi reconstruction produced a non-closed function");
  return lam;
}

inline EdgeVector vector_from_closed(const Instance& inst, const RotationOrder& order,
                                     const ClosedFunction& lam) {
  require_bipartite(inst, "vector_from_closed");
  if (!is_closed(order, lam)) throw InputError("weight function is not closed");
  EdgeVector x = deferred_acceptance(inst, Side::W);
  for (std::size_t i = 0; i < lam.size(); ++i) x += lam[i] * order.family[i].rotation.chi(inst.edge_count());
  if (!inst.in_box(x) || !stable(inst, x))
    throw VerificationError("closed function maps to an unstable vector");
  return x;
}

}  // namespace sppic
