#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sppic/bipartite.hpp"
#include "sppic/choice.hpp"
#include "sppic/edge_vector.hpp"
#include "sppic/error.hpp"
#include "sppic/graph.hpp"
#include "sppic/instance.hpp"

namespace sppic {

/// Bipartite double cover of an instance. Vertex v has copies v^0 (worker
/// side) and v^1 (firm side); base edge e = uv has copies u^0v^1, named
/// "e^u", and v^0u^1, named "e^v".
class SymmetricInstance {
 public:
  explicit SymmetricInstance(const Instance& base) : base_(std::make_shared<Instance>(base)) {
    const Graph& g = base_->graph();
    const std::size_t n = g.vertex_count(), m = g.edge_count();
    std::vector<std::string> vertices;
    for (int i = 0; i < 2; ++i)
      for (VertexIndex v = 0; v < n; ++v) vertices.push_back(copy_name(g.vertex_id(v), i));
    std::vector<EdgeSpec> specs;
    for (EdgeIndex e = 0; e < m; ++e) {
      const Edge& edge = g.edge(e);
      for (int k = 0; k < 2; ++k) {
        VertexIndex u = edge.ends[k], v = edge.ends[1 - k];
        specs.push_back({edge.id + "^" + g.vertex_id(u),
                         {copy_name(g.vertex_id(u), 0), copy_name(g.vertex_id(v), 1)}});
      }
    }
    Graph sg = Graph::build(std::move(vertices), std::move(specs));

    base_edge_.resize(sg.edge_count());
    worker_end_.resize(sg.edge_count());
    copies_.resize(m);
    std::vector<int> caps(sg.edge_count());
    for (EdgeIndex e = 0; e < m; ++e) {
      const Edge& edge = g.edge(e);
      for (int k = 0; k < 2; ++k) {
        EdgeIndex s = sg.edge_by_id(edge.id + "^" + g.vertex_id(edge.ends[k]));
        copies_[e][k] = s;
        base_edge_[s] = e;
        worker_end_[s] = edge.ends[k];
        caps[s] = base_->cap(e);
      }
    }
    sigma_edge_.resize(sg.edge_count());
    for (EdgeIndex e = 0; e < m; ++e) {
      sigma_edge_[copies_[e][0]] = copies_[e][1];
      sigma_edge_[copies_[e][1]] = copies_[e][0];
    }

    std::vector<std::shared_ptr<const ChoiceFunction>> cfs(sg.vertex_count());
    std::vector<Side> sides(sg.vertex_count());
    for (int i = 0; i < 2; ++i)
      for (VertexIndex v = 0; v < n; ++v) {
        VertexIndex sv = i * n + v;
        std::vector<std::size_t> to_base;
        for (EdgeIndex s : sg.star(sv)) to_base.push_back(g.star_position(base_edge_[s], v));
        cfs[sv] = std::make_shared<PermutedCF>(base_->choice_function(v), std::move(to_base));
        sides[sv] = i == 0 ? Side::W : Side::F;
      }
    sym_ = std::make_shared<Instance>(std::move(sg), std::move(caps), std::move(cfs), std::move(sides));
  }

  const Instance& base() const { return *base_; }
  const Instance& sym() const { return *sym_; }

  VertexIndex vertex_copy(VertexIndex v, int i) const { return i * base_->vertex_count() + v; }
  VertexIndex base_vertex(VertexIndex sv) const { return sv % base_->vertex_count(); }
  int copy_index(VertexIndex sv) const { return sv < base_->vertex_count() ? 0 : 1; }
  VertexIndex sigma_vertex(VertexIndex sv) const {
    return vertex_copy(base_vertex(sv), 1 - copy_index(sv));
  }
  EdgeIndex sigma_edge(EdgeIndex s) const { return sigma_edge_.at(s); }
  EdgeIndex base_edge(EdgeIndex s) const { return base_edge_.at(s); }
  /// Base vertex u of the copy u^0 v^1.
  VertexIndex worker_end(EdgeIndex s) const { return worker_end_.at(s); }
  /// The copy u^0 v^1 of base edge e.
  EdgeIndex copy_from(EdgeIndex e, VertexIndex u) const {
    const auto& ends = base_->graph().edge(e).ends;
    if (ends[0] == u) return copies_.at(e)[0];
    if (ends[1] == u) return copies_.at(e)[1];
    throw InputError("vertex is not an end of the edge");
  }

  /// beta: the symmetric vector with both copies equal to x(e).
  EdgeVector lift_symmetric(const EdgeVector& x) const {
    base_->require_in_box(x);
    EdgeVector out(sym_->edge_count());
    for (EdgeIndex s = 0; s < out.size(); ++s) out[s] = x[base_edge_[s]];
    return out;
  }

 private:
  static std::string copy_name(const std::string& v, int i) { return v + "^" + std::to_string(i); }

  std::shared_ptr<const Instance> base_, sym_;
  std::vector<EdgeIndex> sigma_edge_, base_edge_;
  std::vector<VertexIndex> worker_end_;
  std::vector<std::array<EdgeIndex, 2>> copies_;
};

inline SymmetricInstance symmetrize(const Instance& inst) { return SymmetricInstance(inst); }

/// x*(e) = x(sigma(e)).
inline EdgeVector reflect(const SymmetricInstance& si, const EdgeVector& x) {
  if (x.size() != si.sym().edge_count()) throw InputError("vector does not live on the symmetric edges");
  EdgeVector out(x.size());
  for (EdgeIndex s = 0; s < x.size(); ++s) out[s] = x[si.sigma_edge(s)];
  return out;
}

/// sigma applied to every step of the walk. Positive edges of the image are
/// the mirrors of the negative edges of R and vice versa.
inline Rotation reflect(const SymmetricInstance& si, const Rotation& r) {
  std::vector<RotationStep> walk;
  for (const auto& s : r.steps()) {
    if (s.edge >= si.sym().edge_count()) throw InputError("rotation does not live on the symmetric edges");
    walk.push_back({si.sigma_vertex(s.tail), si.sigma_edge(s.edge)});
  }
  return Rotation::from_walk(si.sym(), std::move(walk));
}

/// Some edge e of R has sigma(e) in R with the opposite sign.
inline bool has_mirrored_pair(const SymmetricInstance& si, const Rotation& r) {
  for (std::size_t i = 0; i < r.length(); ++i) {
    int other = r.sign_of(si.sigma_edge(r.steps()[i].edge));
    if (other != 0 && other != r.signs()[i]) return true;
  }
  return false;
}

/// R* == R. A singular rotation always holds some e and sigma(e) with
/// opposite signs; the converse can fail once capacities exceed 1, so only
/// that direction is asserted.
inline bool is_singular(const SymmetricInstance& si, const Rotation& r) {
  bool fixed = reflect(si, r) == r;
  if (fixed) {
    if (!has_mirrored_pair(si, r)) throw InternalError("singular rotation without a mirrored edge pair");
    if (r.length() % 4 != 2) throw InternalError("singular rotation length is not 2 mod 4");
  }
  return fixed;
}

struct QBStep {
  Rotation rotation;
  /// tau_R(x) at the moment R was picked.
  int tau = 0;
  int weight = 0;
  bool singular = false;
};

struct QBOutcome {
  EdgeVector x_tilde;
  std::vector<QBStep> steps;
  std::set<Rotation> used;
  std::vector<Rotation> singular_odd;
  std::vector<Rotation> singular_even;
};

/// Algorithm QB with the lower choice floor(tau/2) on singular rotations.
inline QBOutcome run_qb(const SymmetricInstance& si, std::uint64_t seed = 0) {
  const Instance& sym = si.sym();
  const std::size_t m = sym.edge_count();
  QBOutcome out;
  EdgeVector x = deferred_acceptance(sym, Side::W);
  TieBreak tie(seed);
  const std::size_t bound = route_step_bound(sym) + m + 1;
  while (true) {
    std::vector<Rotation> candidates;
    for (auto& r : find_rotations(sym, x))
      if (!out.used.count(reflect(si, r))) candidates.push_back(std::move(r));
    if (candidates.empty()) break;
    if (out.steps.size() >= bound) throw VerificationError("Algorithm QB exceeded its step bound");
    QBStep step;
    step.rotation = candidates[tie.pick(candidates.size())];
    step.tau = max_feasible_weight(sym, x, step.rotation);
    step.singular = is_singular(si, step.rotation);
    step.weight = step.singular ? step.tau / 2 : step.tau;
    if (step.weight > 0) x += step.weight * step.rotation.chi(m);
    out.used.insert(step.rotation);
    if (step.singular) (step.tau % 2 ? out.singular_odd : out.singular_even).push_back(step.rotation);
    out.steps.push_back(std::move(step));
  }
  out.x_tilde = x;
  std::sort(out.singular_odd.begin(), out.singular_odd.end());
  std::sort(out.singular_even.begin(), out.singular_even.end());

  for (std::size_t i = 0; i < out.singular_odd.size(); ++i)
    for (std::size_t j = i + 1; j < out.singular_odd.size(); ++j)
      if (!edge_disjoint(out.singular_odd[i], out.singular_odd[j]))
        throw VerificationError("odd singular rotations share an edge");
  EdgeVector expect = x;
  for (const auto& r : out.singular_odd) expect += r.chi(m);
  if (reflect(si, x) != expect)
    throw VerificationError("QB result is not quasi-balanced: x* differs from x + sum of odd singular rotations");
  return out;
}

}  // namespace sppic
