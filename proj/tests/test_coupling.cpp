#include <gtest/gtest.h>

#include "chromatic/coupling.hpp"
#include "support.hpp"

namespace chromatic {
namespace {

using testing::make_instance;

TEST(NextVertex, Examples) {
  const auto inst = make_instance(5, 2, {{1, 0, 4}, {2, 3, 4}});
  const auto root = initial_state(inst, 0, 0, 1);
  EXPECT_EQ(next_vertex(inst, root), std::optional<Vertex>(1));

  auto cleared = root;
  std::fill(cleared.live.begin(), cleared.live.end(), 0);
  EXPECT_EQ(next_vertex(inst, cleared), std::nullopt);

  const auto two = make_instance(6, 2, {{0, 4, 5}, {0, 1, 2}});
  EXPECT_EQ(next_vertex(two, initial_state(two, 0, 0, 1)), std::optional<Vertex>(4));
}

TEST(Extend, CouplingSuccessAndFailure) {
  const auto inst = make_instance(3, 3, {{0, 1, 2}});
  const auto root = initial_state(inst, 0, 0, 1);
  const auto same = extend(inst, root, 1, 2, 2, 0);
  EXPECT_FALSE(same.in_v1[1]);
  EXPECT_EQ(same.num_coloured, 2u);
  EXPECT_FALSE(same.live[0]);  // satisfied by both
  const auto diff = extend(inst, root, 1, 1, 0, 0);
  EXPECT_TRUE(diff.in_v1[1]);
  EXPECT_THROW(extend(inst, root, 2, 0, 0, 0), Error);
}

TEST(Extend, K2RuleMovesBlanksToV1) {
  const auto inst = make_instance(4, 3, {{0, 1, 2, 3}});
  const auto root = initial_state(inst, 0, 0, 1);
  const auto s = extend(inst, root, 1, 0, 0, 2);
  EXPECT_FALSE(s.live[0]);
  EXPECT_TRUE(s.in_v1[2]);
  EXPECT_TRUE(s.in_v1[3]);
  EXPECT_FALSE(s.in_v1[1]);
  EXPECT_EQ(next_vertex(inst, s), std::nullopt);
  EXPECT_EQ(state_violation(inst, s, 2), "");
}

TEST(BlockedEdges, Examples) {
  const auto inst = make_instance(7, 3, {{0, 1, 2}, {0, 3, 4}, {4, 5, 6}});
  const auto root = initial_state(inst, 0, 0, 1);
  EXPECT_EQ(blocked_edges(inst, root, 2), (std::vector<std::uint32_t>{0, 1}));
  const auto s = extend(inst, root, 1, 2, 2, 0);
  const auto blocked = blocked_edges(inst, s, 0);
  EXPECT_EQ(blocked, (std::vector<std::uint32_t>{0, 1}));
  // Edge 0 is satisfied by both sides but still holds the root discrepancy.
  const auto far = make_instance(7, 3, {{0, 1, 2}, {1, 3, 4}});
  auto t = extend(far, initial_state(far, 0, 0, 1), 1, 2, 2, 0);
  EXPECT_EQ(blocked_edges(far, t, 0), (std::vector<std::uint32_t>{0}));
}

TEST(MaximalCoupling, PreservesMarginals) {
  const std::vector<Rational> px{Rational(1, 2), Rational(1, 3), Rational(1, 6)};
  const std::vector<Rational> py{Rational(1, 6), Rational(1, 3), Rational(1, 2)};
  const auto joint = maximal_coupling(px, py);
  for (int i = 0; i < 3; ++i) {
    Rational row = 0, col = 0;
    for (int j = 0; j < 3; ++j) {
      row += joint[i * 3 + j];
      col += joint[j * 3 + i];
    }
    EXPECT_EQ(row, px[i]);
    EXPECT_EQ(col, py[i]);
    EXPECT_EQ(joint[i * 3 + i], std::min(px[i], py[i]));
  }
  EXPECT_EQ(joint[0 * 3 + 2], Rational(1, 3));
}

TEST(BuildTree, StructureExamples) {
  const auto inst = make_instance(3, 2, {{0, 1, 2}});
  const auto tree = build_tree(inst, 0, 0, 1, 1, 0, 10);
  ASSERT_EQ(tree.node(0).status, NodeStatus::Internal);
  EXPECT_EQ(tree.node(0).first_child, 1u);
  EXPECT_EQ(tree.size() - 1 - 4 * (tree.internal_count() - 1), 4u);
  EXPECT_EQ(tree.truncated_count(), 0u);

  const auto shallow = build_tree(inst, 0, 0, 1, 1, 0, 1);
  EXPECT_EQ(shallow.size(), 1u);
  EXPECT_EQ(shallow.node(0).status, NodeStatus::Truncated);

  for (const auto& n : tree.nodes()) EXPECT_LE(n.depth, 2u);
}

TEST(BuildTree, ChildrenFullyMaterialised) {
  const auto inst = make_instance(4, 3, {{0, 1, 2}, {1, 2, 3}});
  const auto tree = build_tree(inst, 0, 0, 1, 1, 0, 10);
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const auto& n = tree.node(i);
    if (n.status != NodeStatus::Internal) continue;
    for (Colour cx = 0; cx < 3; ++cx) {
      for (Colour cy = 0; cy < 3; ++cy) {
        const auto& c = tree.node(tree.child(i, cx, cy));
        EXPECT_EQ(c.parent, i);
        EXPECT_EQ(c.cx, cx);
        EXPECT_EQ(c.cy, cy);
        EXPECT_EQ(c.depth, n.depth + 1);
        EXPECT_EQ(c.vertex, n.next);
      }
    }
  }
  EXPECT_EQ(tree.truncated_count(), 0u);
}

TEST(BuildTree, BudgetAndArguments) {
  const auto inst = make_instance(4, 3, {{0, 1, 2}, {1, 2, 3}});
  try {
    build_tree(inst, 0, 0, 1, 1, 0, 10, TreeOptions{5, 24.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
  EXPECT_THROW(build_tree(inst, 0, 0, 1, 1, 1, 10), Error);
  EXPECT_THROW(build_tree(inst, 0, 0, 1, 4, 0, 10), Error);
  EXPECT_THROW(build_tree(inst, 0, 1, 1, 1, 0, 10), Error);
  EXPECT_THROW(build_tree(inst, 0, 0, 1, 1, 0, 0), Error);
}

// Walks every node of trees over random instances and checks the state
// invariants, the status rules, and the leaf ratios against the oracle.
TEST(BuildTree, InvariantsAndLeafRatiosOnRandomInstances) {
  Rng rng(404);
  int trees = 0, leaves_checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int q = std::uniform_int_distribution<int>(2, 3)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(3, 4)(rng);
    const auto inst = testing::random_instance(rng, 7, q, 4, k, k, 15);
    if (inst.num_edges() == 0) continue;
    const std::size_t k1 = std::min<std::size_t>(inst.min_edge_size(), 2);
    const std::size_t k2 = std::uniform_int_distribution<std::size_t>(0, k1 - 1)(rng);
    const Vertex v = inst.edge(0).vertices.front();
    CouplingTree tree;
    try {
      tree = build_tree(inst, v, 0, 1, k1, k2, 5, TreeOptions{200000, 24.0});
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::BudgetExceeded);
      continue;
    }
    ++trees;
    for (std::uint32_t i = 0; i < tree.size(); ++i) {
      const auto s = tree.state_at(i);
      ASSERT_EQ(state_violation(inst, s, k2), "") << serialize(inst);
      const auto& n = tree.node(i);
      EXPECT_EQ(n.depth + 1, s.num_coloured);
      switch (n.status) {
        case NodeStatus::Truncated: EXPECT_EQ(s.num_coloured, 5u); break;
        case NodeStatus::Internal: EXPECT_EQ(next_vertex(inst, s), std::optional<Vertex>(n.next)); break;
        case NodeStatus::Halted: {
          EXPECT_EQ(next_vertex(inst, s), std::nullopt);
          const auto cx = count_extensions(inst, s.x);
          const auto cy = count_extensions(inst, s.y);
          const auto& counts = tree.counts(i);
          // |C_x| = N_x * F and |C_y| = N_y * F for a common factor F.
          EXPECT_EQ(cx * counts.ny, cy * counts.nx) << serialize(inst);
          if (cy > 0) {
            EXPECT_EQ(leaf_ratio(inst, s), Rational(cx, cy));
            ++leaves_checked;
          }
          break;
        }
      }
    }
  }
  EXPECT_GT(trees, 10);
  EXPECT_GT(leaves_checked, 100);
}

TEST(LeafRatio, TrivialCases) {
  const auto inst = make_instance(3, 2, {{0, 1, 2}});
  auto s = initial_state(inst, 0, 0, 1);
  s = extend(inst, s, 1, 0, 0, 0);
  s = extend(inst, s, 2, 1, 1, 0);
  EXPECT_EQ(leaf_ratio(inst, s), 1);
  const auto isolated = make_instance(3, 2, {{1, 2}});
  EXPECT_EQ(leaf_ratio(isolated, initial_state(isolated, 0, 0, 1)), 1);
  EXPECT_THROW(leaf_ratio(inst, initial_state(inst, 0, 0, 1)), Error);
}

TEST(RunCoupling, DeterministicAndTerminal) {
  const auto inst = make_instance(6, 3, {{0, 1, 2}, {1, 2, 3}, {3, 4, 5}});
  Rng a(7), b(7);
  const auto ra = run_coupling(inst, 0, 0, 1, 2, 1, a);
  const auto rb = run_coupling(inst, 0, 0, 1, 2, 1, b);
  EXPECT_EQ(ra.trace, rb.trace);
  EXPECT_EQ(next_vertex(inst, ra.state), std::nullopt);
  EXPECT_EQ(state_violation(inst, ra.state, 1), "");
}

TEST(RunCoupling, ImmediateHalt) {
  // The only edge through v is satisfied on both sides from the start.
  const auto inst = make_instance(6, 3, {{0, 1, 2}, {3, 4, 5}}, {{2}});
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto run = run_coupling(inst, 0, 0, 1, 1, 0, rng);
    EXPECT_LE(run.state.num_coloured, 2u);
    EXPECT_EQ(run.state.live[1], 1);
  }
}

TEST(LeafCounts, ZeroWhenOuterBlanksAreStuck) {
  // Vertex 3 is forced to 1 by the pinned pair and to 0 by {1, 3} once
  // vertices 1 and 2 take colours 1 and 0.
  const auto inst = make_instance(4, 2, {{0, 1, 2}, {1, 2, 3}, {2, 3}, {1, 3}}, {{}, {}, {0}});
  const auto tree = build_tree(inst, 0, 0, 1, 2, 0, 5);
  int stuck = 0;
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    if (tree.node(i).status != NodeStatus::Halted) continue;
    const auto s = tree.state_at(i);
    const BigInt cx = count_extensions(inst, s.x), cy = count_extensions(inst, s.y);
    const auto& lc = tree.counts(i);
    EXPECT_EQ(lc.nx * cy, lc.ny * cx);
    if (cx == 0 && cy == 0) {
      EXPECT_EQ(lc.nx, 0);
      EXPECT_EQ(lc.ny, 0);
      ++stuck;
    }
  }
  EXPECT_GT(stuck, 0);
}

}  // namespace
}  // namespace chromatic
