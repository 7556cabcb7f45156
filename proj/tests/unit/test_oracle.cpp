#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace sppic;

namespace {

std::vector<EdgeVector> reference(const Instance& inst) {
  std::vector<EdgeVector> out;
  for (auto& x : fixtures::reference_stable_set(inst)) out.emplace_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Enumerate, B4) {
  Instance inst = fixtures::b4();
  auto all = enumerate_stable(inst, EnumerationMode::bipartite);
  ASSERT_EQ(all.size(), 2u);
  auto ext = lattice_extremes(inst, all);
  EXPECT_EQ(ext.min, deferred_acceptance(inst, Side::W));
  EXPECT_EQ(ext.max, deferred_acceptance(inst, Side::F));
  EXPECT_EQ(stable_hasse_edges(inst, all).size(), 1u);
}

TEST(Enumerate, Triangles) {
  EXPECT_TRUE(enumerate_stable(fixtures::triangle()).empty());
  Instance ok = fixtures::solvable_triangle();
  auto all = enumerate_stable(ok);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], fixtures::vec(ok, {{"ab", 1}}));
  EXPECT_THROW(enumerate_stable(ok, EnumerationMode::bipartite), InputError);
}

TEST(Enumerate, Budgets) {
  Instance inst = fixtures::b4(3, 3);
  EnumerationBudget tight;
  tight.max_box = 10;
  EXPECT_THROW(enumerate_stable(inst, EnumerationMode::bipartite, tight), BudgetExceeded);
  tight.max_box = 0;
  tight.max_nodes = 5;
  EXPECT_THROW(enumerate_stable(inst, EnumerationMode::bipartite, tight), BudgetExceeded);
}

TEST(Enumerate, MatchesFullScanBipartite) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Instance inst = fixtures::random_bipartite(seed, {3, 3, 75, 3, 3});
    auto ref = reference(inst);
    EXPECT_EQ(enumerate_stable(inst, EnumerationMode::bipartite), ref) << "seed " << seed;
    EnumerationBudget plain;
    plain.assume_substitutable = false;
    EXPECT_EQ(enumerate_stable(inst, EnumerationMode::bipartite, plain), ref);
  }
}

TEST(Enumerate, MatchesFullScanGeneral) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Instance inst = fixtures::random_general(seed, 5, 70, 2, 2);
    EXPECT_EQ(enumerate_stable(inst), reference(inst)) << "seed " << seed;
  }
}

TEST(Lattice, ExtremesAreDeferredAcceptance) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Instance inst = fixtures::random_bipartite(seed, {4, 3, 60, 2, 3});
    auto all = enumerate_stable(inst, EnumerationMode::bipartite);
    auto ext = lattice_extremes(inst, all);
    EXPECT_EQ(ext.min, deferred_acceptance(inst, Side::W)) << "seed " << seed;
    EXPECT_EQ(ext.max, deferred_acceptance(inst, Side::F)) << "seed " << seed;
  }
}

// Firms and workers order the stable set in opposite directions.
TEST(Lattice, Polarity) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Instance inst = fixtures::random_bipartite(seed, {3, 3, 80, 3, 3});
    auto all = enumerate_stable(inst, EnumerationMode::bipartite);
    for (const auto& x : all)
      for (const auto& y : all) EXPECT_EQ(precedes_F(inst, x, y), precedes_W(inst, y, x));
  }
}

TEST(Lattice, SuccessorsAreRotationTargets) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Instance inst = fixtures::random_bipartite(seed, {3, 3, 80, 3, 2});
    auto all = enumerate_stable(inst, EnumerationMode::bipartite);
    for (const auto& x : all) {
      std::vector<EdgeVector> targets;
      for (const auto& r : find_rotations(inst, x)) targets.push_back(x + r.chi(inst.edge_count()));
      std::sort(targets.begin(), targets.end());
      EXPECT_EQ(targets, immediate_successors(inst, all, x)) << "seed " << seed;
    }
    for (auto [i, j] : stable_hasse_edges(inst, all))
      EXPECT_TRUE(is_alternating_cycle_vector(inst, all[j] - all[i]));
  }
}

TEST(Lattice, AlternatingCycleShape) {
  Instance inst = fixtures::b4();
  EdgeVector d = deferred_acceptance(inst, Side::F) - deferred_acceptance(inst, Side::W);
  EXPECT_TRUE(is_alternating_cycle_vector(inst, d));
  EXPECT_FALSE(is_alternating_cycle_vector(inst, inst.zero()));
  EXPECT_FALSE(is_alternating_cycle_vector(inst, 2 * d));
  EdgeVector half = d;
  half[inst.graph().edge_by_id("w1f1")] = 0;
  EXPECT_FALSE(is_alternating_cycle_vector(inst, half));
}

TEST(Lattice, Errors) {
  Instance inst = fixtures::b4();
  EXPECT_THROW(lattice_extremes(inst, {}), InputError);
  EXPECT_THROW(immediate_successors(inst, {deferred_acceptance(inst, Side::W)}, inst.zero()), InputError);
}
