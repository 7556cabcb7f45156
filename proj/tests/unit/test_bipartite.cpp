#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace sppic;
using fixtures::vec;

namespace {

// C_f(x_f + chi_f^{R+}) == x_f + chi_f^{R+} - chi_f^{R-} at every firm on R.
bool aggregate_rule_holds(const Instance& inst, const EdgeVector& x, const Rotation& r) {
  EdgeVector plus = inst.zero(), minus = inst.zero();
  std::set<VertexIndex> firms;
  const auto& steps = r.steps();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    (r.signs()[i] > 0 ? plus : minus)[steps[i].edge] = 1;
    VertexIndex head = inst.graph().other_end(steps[i].edge, steps[i].tail);
    firms.insert(inst.side(head) == Side::F ? head : steps[i].tail);
  }
  for (VertexIndex f : firms) {
    auto z = fixtures::star_of(inst, fixtures::to_ints(x + plus), f);
    auto want = fixtures::star_of(inst, fixtures::to_ints(x + plus - minus), f);
    if (fixtures::call_cf(inst, f, z) != want) return false;
  }
  return true;
}

std::vector<EdgeVector> stable_vectors(const Instance& inst) {
  std::vector<EdgeVector> out;
  for (auto& x : fixtures::reference_stable_set(inst)) out.emplace_back(x);
  return out;
}

}  // namespace

TEST(DeferredAcceptance, B4Extremes) {
  Instance inst = fixtures::b4();
  EXPECT_EQ(deferred_acceptance(inst, Side::W), vec(inst, {{"w1f1", 1}, {"w2f2", 1}}));
  EXPECT_EQ(deferred_acceptance(inst, Side::F), vec(inst, {{"w1f2", 1}, {"w2f1", 1}}));
}

TEST(DeferredAcceptance, SingleEdgeSaturates) {
  fixtures::Builder b;
  b.vertex("w", 3, {"wf"}).vertex("f", 2, {"wf"}).edge("wf", "w", "f", 3).sides({"w"}, {"f"});
  Instance inst = b.build();
  EXPECT_EQ(deferred_acceptance(inst, Side::W), (EdgeVector{2}));
  EXPECT_EQ(deferred_acceptance(inst, Side::F), (EdgeVector{2}));
  EXPECT_TRUE(find_rotations(inst, EdgeVector{2}).empty());
}

TEST(DeferredAcceptance, ZeroCapacities) {
  Instance inst = fixtures::b4(0, 1);
  EXPECT_TRUE(deferred_acceptance(inst, Side::W).is_zero());
  EXPECT_TRUE(deferred_acceptance(inst, Side::F).is_zero());
  EXPECT_TRUE(build_full_route(inst).steps.empty());
}

TEST(DeferredAcceptance, RequiresBipartition) {
  EXPECT_THROW(deferred_acceptance(fixtures::triangle(), Side::W), InputError);
  EXPECT_THROW(find_rotations(fixtures::triangle(), EdgeVector{0, 0, 0}), InputError);
}

TEST(Stability, ReportNamesBlockingEdges) {
  Instance inst = fixtures::b4();
  auto r = is_stable(inst, inst.zero());
  EXPECT_FALSE(r.stable);
  EXPECT_TRUE(r.unacceptable.empty());
  EXPECT_EQ(r.blocking.size(), 4u);

  auto over = is_stable(inst, vec(inst, {{"w1f1", 1}, {"w1f2", 1}}));
  EXPECT_FALSE(over.stable);
  EXPECT_EQ(over.unacceptable, std::vector<VertexIndex>{inst.graph().vertex("w1")});

  EXPECT_TRUE(is_stable(inst, vec(inst, {{"w1f1", 1}, {"w2f2", 1}})).stable);
  EXPECT_THROW(is_stable(inst, vec(inst, {{"w1f1", 2}})), InputError);
}

TEST(Order, B4Chain) {
  Instance inst = fixtures::b4();
  EdgeVector lo = deferred_acceptance(inst, Side::W), hi = deferred_acceptance(inst, Side::F);
  EXPECT_TRUE(precedes_F(inst, lo, hi));
  EXPECT_FALSE(precedes_F(inst, hi, lo));
  EXPECT_FALSE(precedes_F(inst, lo, lo));
  EXPECT_TRUE(precedes_W(inst, hi, lo));
  EXPECT_THROW(precedes_F(inst, lo, vec(inst, {{"w1f1", 1}, {"w1f2", 1}})), InputError);
}

TEST(Rotations, B4SingleRotation) {
  Instance inst = fixtures::b4();
  EdgeVector lo = deferred_acceptance(inst, Side::W);
  auto rots = find_rotations(inst, lo);
  ASSERT_EQ(rots.size(), 1u);
  const Rotation& r = rots[0];
  EXPECT_EQ(r.length(), 4u);
  EXPECT_EQ(max_feasible_weight(inst, lo, r), 1);
  EXPECT_EQ(apply_rotation(inst, lo, r, 1), deferred_acceptance(inst, Side::F));
  EXPECT_TRUE(aggregate_rule_holds(inst, lo, r));
  EXPECT_TRUE(find_rotations(inst, deferred_acceptance(inst, Side::F)).empty());
  EXPECT_EQ(r.chi(4).total(), 4);
  int net = 0;
  for (int v : r.chi(4)) net += v;
  EXPECT_EQ(net, 0);
  EXPECT_THROW(apply_rotation(inst, lo, r, 2), InputError);
  EXPECT_THROW(apply_rotation(inst, lo, r, 0), InputError);
}

TEST(Rotations, ScaledB4HasWeightThree) {
  Instance inst = fixtures::b4(3, 3);
  EdgeVector lo = deferred_acceptance(inst, Side::W);
  EXPECT_EQ(lo, vec(inst, {{"w1f1", 3}, {"w2f2", 3}}));
  auto route = build_full_route(inst);
  ASSERT_EQ(route.steps.size(), 1u);
  EXPECT_EQ(route.steps[0].weight, 3);
  EXPECT_TRUE(route.full);
  EXPECT_EQ(stable_vectors(inst).size(), 4u);
}

TEST(Rotations, CanonicalFormStartsAtSmallestEdge) {
  Instance inst = fixtures::b4();
  const Graph& g = inst.graph();
  std::vector<RotationStep> walk{{g.vertex("f2"), g.edge_by_id("w2f2")},
                                 {g.vertex("w2"), g.edge_by_id("w2f1")},
                                 {g.vertex("f1"), g.edge_by_id("w1f1")},
                                 {g.vertex("w1"), g.edge_by_id("w1f2")}};
  Rotation r = Rotation::from_walk(inst, walk);
  EXPECT_EQ(r.steps()[0].edge, g.edge_by_id("w1f1"));
  EXPECT_EQ(r.sign_of(g.edge_by_id("w1f1")), -1);
  EXPECT_EQ(r.sign_of(g.edge_by_id("w1f2")), 1);
  std::rotate(walk.begin(), walk.begin() + 1, walk.end());
  EXPECT_EQ(Rotation::from_walk(inst, walk), r);
  walk.pop_back();
  EXPECT_THROW(Rotation::from_walk(inst, walk), InputError);
}

TEST(Rotations, RejectsUnstableStart) {
  Instance inst = fixtures::b4();
  EXPECT_THROW(find_rotations(inst, inst.zero()), InputError);
}

TEST(RotationProperties, RandomCorpus) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Instance inst = fixtures::random_bipartite(seed, {3, 3, 80, 3, 3});
    for (const auto& x : stable_vectors(inst)) {
      auto rots = find_rotations(inst, x);
      for (std::size_t i = 0; i < rots.size(); ++i) {
        EXPECT_TRUE(aggregate_rule_holds(inst, x, rots[i])) << "seed " << seed;
        for (std::size_t j = i + 1; j < rots.size(); ++j) EXPECT_TRUE(edge_disjoint(rots[i], rots[j]));
        EdgeVector y = apply_rotation(inst, x, rots[i], 1);
        EXPECT_TRUE(precedes_F(inst, x, y));
        EXPECT_TRUE(fixtures::reference_stable(inst, fixtures::to_ints(y)));
      }
    }
  }
}

// Any partial weights on R(x) give a stable vector with the predicted residual taus.
TEST(RotationProperties, Commutation) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Instance inst = fixtures::random_bipartite(seed, {3, 3, 90, 3, 3});
    for (const auto& x : stable_vectors(inst)) {
      auto rots = find_rotations(inst, x);
      std::vector<int> tau;
      for (const auto& r : rots) tau.push_back(max_feasible_weight(inst, x, r));
      std::vector<int> lam(rots.size(), 0);
      while (true) {
        EdgeVector y = x;
        for (std::size_t i = 0; i < rots.size(); ++i) y += lam[i] * rots[i].chi(inst.edge_count());
        ASSERT_TRUE(stable(inst, y)) << "seed " << seed;
        auto at_y = find_rotations(inst, y);
        for (std::size_t i = 0; i < rots.size(); ++i) {
          if (lam[i] == tau[i]) continue;
          EXPECT_NE(std::find(at_y.begin(), at_y.end(), rots[i]), at_y.end());
          EXPECT_EQ(max_feasible_weight(inst, y, rots[i]), tau[i] - lam[i]);
        }
        std::size_t i = 0;
        while (i < lam.size() && lam[i] == tau[i]) lam[i++] = 0;
        if (i == lam.size()) break;
        ++lam[i];
      }
    }
  }
}

TEST(Routes, BoundOnePeakAndFamilyTotal) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Instance inst = fixtures::random_bipartite(seed, {3, 4, 70, 3, 3});
    EdgeVector lo = deferred_acceptance(inst, Side::W), hi = deferred_acceptance(inst, Side::F);
    for (std::uint64_t tie = 0; tie < 4; ++tie) {
      Route route = build_full_route(inst, tie);
      EXPECT_TRUE(route.full);
      EXPECT_TRUE(route.principal);
      EXPECT_TRUE(route.non_excessive);
      EXPECT_LE(2 * route.steps.size(), static_cast<std::size_t>(inst.b_max()) * inst.edge_count());
      EdgeVector sum = lo;
      for (const auto& s : route.steps) sum += s.weight * s.rotation.chi(inst.edge_count());
      EXPECT_EQ(sum, hi);
      for (EdgeIndex e = 0; e < inst.edge_count(); ++e) {
        std::vector<int> seq{route.start[e]};
        for (const auto& s : route.steps) seq.push_back(s.to[e]);
        std::size_t k = 0;
        while (k + 1 < seq.size() && seq[k + 1] >= seq[k]) ++k;
        while (k + 1 < seq.size() && seq[k + 1] <= seq[k]) ++k;
        EXPECT_EQ(k + 1, seq.size()) << "seed " << seed << " edge " << e;
      }
    }
  }
}

TEST(Routes, ClassifyFlags) {
  Instance inst = fixtures::b4(3, 3);
  Route route = build_full_route(inst);
  route.steps[0].weight = 2;
  classify_route(route);
  EXPECT_FALSE(route.principal);
  EXPECT_TRUE(route.non_excessive);
  route.steps.push_back(route.steps[0]);
  classify_route(route);
  EXPECT_FALSE(route.non_excessive);
}
