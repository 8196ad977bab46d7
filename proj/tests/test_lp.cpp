#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chromatic/lll.hpp"
#include "chromatic/lp.hpp"
#include "support.hpp"

namespace chromatic {
namespace {

using testing::brute_count;
using testing::brute_marginal;
using testing::for_each_assignment;
using testing::make_instance;
using testing::random_instance;

constexpr double kTol = 1e-9;

Instance single_edge() { return make_instance(3, 2, {{0, 1, 2}}); }
Instance pinned_edge() { return make_instance(3, 2, {{0, 1, 2}}, {{0}}); }

CouplingTree full_tree(const Instance& inst, Vertex v, Colour c1, Colour c2, std::size_t k2 = 0) {
  return build_tree(inst, v, c1, c2, inst.min_edge_size(), k2, inst.num_vertices() + 1);
}

Rational oracle_ratio(const Instance& inst, Vertex v, Colour c1, Colour c2) {
  PartialColouring a(inst.num_vertices(), kBlank), b(inst.num_vertices(), kBlank);
  a[v] = c1;
  b[v] = c2;
  return Rational(brute_count(inst, &a), brute_count(inst, &b));
}

// Random small instance whose root colours both extend to proper colourings.
struct Case {
  Instance inst;
  Vertex v;
  Colour c1, c2;
};

std::optional<Case> random_case(Rng& rng, std::size_t k_lo = 2) {
  const std::size_t n = 4 + rng() % 3;
  const int q = 2 + static_cast<int>(rng() % 2);
  const std::size_t m = 1 + rng() % 4;
  Instance inst = random_instance(rng, n, q, m, k_lo, 3, 30);
  if (inst.num_edges() == 0) return std::nullopt;
  const Vertex v = static_cast<Vertex>(rng() % n);
  const Colour c1 = static_cast<Colour>(rng() % static_cast<unsigned>(q));
  const Colour c2 = (c1 + 1) % q;
  PartialColouring a(n, kBlank), b(n, kBlank);
  a[v] = c1;
  b[v] = c2;
  if (brute_count(inst, &a) == 0 || brute_count(inst, &b) == 0) return std::nullopt;
  return Case{std::move(inst), v, c1, c2};
}

TEST(GenerateLp, RootOnlyTree) {
  const auto tree = build_tree(single_edge(), 0, 0, 1, 3, 0, 1);
  const auto sys = generate_lp(tree, 0.5, 2.0, 5.0);
  EXPECT_EQ(sys.constraints.size(), 2u);
  EXPECT_EQ(sys.count(ConstraintFamily::RootMass), 2u);
  EXPECT_TRUE(sys.vacuous);
  EXPECT_EQ(sys.num_vars, 2u);
}

TEST(GenerateLp, InternalRootWithTwoColours) {
  const auto tree = build_tree(single_edge(), 0, 0, 1, 3, 0, 2);
  const auto sys = generate_lp(tree, 0.5, 2.0, 5.0);
  EXPECT_EQ(sys.count(ConstraintFamily::RowSum), 2u);
  EXPECT_EQ(sys.count(ConstraintFamily::ColumnSum), 2u);
  EXPECT_EQ(sys.count(ConstraintFamily::OffDiagonal), 4u);
  for (const auto& c : sys.constraints) {
    if (c.family == ConstraintFamily::RowSum || c.family == ConstraintFamily::ColumnSum) {
      EXPECT_EQ(c.terms.size(), 3u);
    }
  }
}

TEST(GenerateLp, CountsMatchFormulaOnRandomTrees) {
  Rng rng(5);
  int checked = 0;
  while (checked < 60) {
    const auto cs = random_case(rng);
    if (!cs) continue;
    const std::size_t L = 1 + rng() % (cs->inst.num_vertices() + 1);
    const auto tree = build_tree(cs->inst, cs->v, cs->c1, cs->c2, cs->inst.min_edge_size(), 0, L);
    const auto sys = generate_lp(tree, 0.5, 2.0, 50.0);
    EXPECT_EQ(sys.constraints.size(), lp_constraint_count(tree, 50.0));
    EXPECT_EQ(sys.count(ConstraintFamily::LeafRatio), 2 * tree.halted_count());
    EXPECT_EQ(sys.vacuous, tree.halted_count() == 0);
    std::vector<int> in_equality(sys.num_vars, 0);
    for (const auto& c : sys.constraints) {
      if (c.sense != Sense::Equal) continue;
      for (const auto& t : c.terms) in_equality[t.var] = 1;
    }
    for (std::size_t j = 0; j < sys.num_vars; ++j) EXPECT_TRUE(in_equality[j]) << "variable " << j;
    ++checked;
  }
}

TEST(Feasible, ContradictoryGuesses) {
  const auto tree = full_tree(single_edge(), 0, 0, 1);
  const auto sys = generate_lp(tree, 2.0, 0.5, 5.0);
  EXPECT_FALSE(feasible(sys, kTol));
  EXPECT_FALSE(feasible_dense(sys, kTol));
}

TEST(Feasible, EmptySystem) {
  LPSystem sys;
  EXPECT_TRUE(feasible(sys, kTol));
  EXPECT_THROW(feasible(sys, 0.0), Error);
}

TEST(Feasible, OracleBracketWithLooseSlack) {
  const auto tree = full_tree(pinned_edge(), 0, 0, 1);
  const auto sys = generate_lp(tree, 0.7, 0.8, 5.0);
  EXPECT_TRUE(feasible(sys, kTol));
  EXPECT_TRUE(feasible_dense(sys, kTol));
  const auto off = generate_lp(tree, 0.8, 0.9, 5.0);
  EXPECT_FALSE(feasible(off, kTol));
  EXPECT_FALSE(feasible_dense(off, kTol));
}

// The cone solver and the dense simplex must agree up to a relative margin.
TEST(Feasible, RoutesAgreeOnRandomTrees) {
  Rng rng(17);
  std::uniform_real_distribution<double> logr(-1.0, 1.0);
  int checked = 0;
  while (checked < 80) {
    const auto cs = random_case(rng);
    if (!cs) continue;
    const std::size_t L = 2 + rng() % cs->inst.num_vertices();
    const auto tree = build_tree(cs->inst, cs->v, cs->c1, cs->c2, cs->inst.min_edge_size(), 0, L);
    if (tree.size() > 120) continue;
    const double t_star = (rng() % 2) ? 5.0 : 12.0;
    const double truth = to_double(oracle_ratio(cs->inst, cs->v, cs->c1, cs->c2));
    for (int rep = 0; rep < 4; ++rep) {
      double a = truth * std::exp(logr(rng)), b = truth * std::exp(logr(rng));
      if (a > b) std::swap(a, b);
      const double m = 1e-6;
      const bool cone = feasible(generate_lp(tree, a, b, t_star), kTol);
      const bool dense = feasible_dense(generate_lp(tree, a, b, t_star), kTol);
      if (cone) EXPECT_TRUE(feasible_dense(generate_lp(tree, a * (1 - m), b * (1 + m), t_star), kTol));
      if (dense) EXPECT_TRUE(feasible(generate_lp(tree, a * (1 - m), b * (1 + m), t_star), kTol));
      if (!cone) EXPECT_FALSE(feasible_dense(generate_lp(tree, a * (1 + m), b * (1 - m), t_star), kTol));
    }
    ++checked;
  }
}

TEST(Feasible, EnlargingBracketPreservesFeasibility) {
  Rng rng(23);
  std::uniform_real_distribution<double> logr(-1.5, 1.5), grow(0.0, 0.5);
  int checked = 0;
  while (checked < 60) {
    const auto cs = random_case(rng);
    if (!cs) continue;
    const auto tree = full_tree(cs->inst, cs->v, cs->c1, cs->c2);
    TreeConeSolver solver(tree, 5.0, kTol);
    double a = std::exp(logr(rng)), b = std::exp(logr(rng));
    if (a > b) std::swap(a, b);
    if (!solver.feasible(a, b)) continue;
    for (int step = 0; step < 5; ++step) {
      a *= std::exp(-grow(rng));
      b *= std::exp(grow(rng));
      EXPECT_TRUE(solver.feasible(a, b));
    }
    ++checked;
  }
}

// Leaves of a full tree reached by paths whose x side agrees with sigma.
double consistent_leaf_mass(const CouplingTree& tree, const std::vector<double>& p, const FullColouring& sigma) {
  double total = 0.0;
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    if (tree.node(i).status == NodeStatus::Internal) continue;
    const auto s = tree.state_at(i);
    bool agrees = true;
    for (Vertex u = 0; u < sigma.size(); ++u) agrees = agrees && (s.x[u] == kBlank || s.x[u] == sigma[u]);
    if (agrees) total += p[x_var(i)];
  }
  return total;
}

TEST(Feasible, SolutionsConserveMassAlongColourings) {
  Rng rng(31);
  int checked = 0;
  while (checked < 25) {
    const auto cs = random_case(rng);
    if (!cs) continue;
    const auto tree = full_tree(cs->inst, cs->v, cs->c1, cs->c2);
    const double truth = to_double(oracle_ratio(cs->inst, cs->v, cs->c1, cs->c2));
    if (tree.size() > 120) continue;
    const auto sys = generate_lp(tree, truth * 0.9, truth * 1.1, 5.0);
    double violation = 0.0;
    const auto p = dense_solution(sys, violation);
    if (!p) continue;
    ASSERT_LE(violation, kTol);
    for_each_assignment(cs->inst.num_vertices(), cs->inst.num_colours(), [&](const FullColouring& sigma) {
      if (sigma[cs->v] != cs->c1 || !is_proper(cs->inst, sigma)) return;
      EXPECT_NEAR(consistent_leaf_mass(tree, *p, sigma), 1.0, 1e-6);
    });
    ++checked;
  }
}

TEST(TrueValues, RootAndRatio) {
  const auto tree = full_tree(pinned_edge(), 0, 0, 1);
  const auto tv = true_lp_values(tree);
  EXPECT_EQ(tv.px[0], 1);
  EXPECT_EQ(tv.py[0], 1);
  EXPECT_EQ(tv.ratio, Rational(3, 4));
  const auto rep = check_truth(tree, tv, Rational(5));
  EXPECT_TRUE(rep.leaf_ratio_ok) << rep.first_failure;
  EXPECT_TRUE(rep.mass_ok) << rep.first_failure;
  EXPECT_TRUE(rep.off_diagonal_ok) << rep.first_failure;
}

bool marginals_within_bounds(const CouplingTree& tree, const Rational& t) {
  const auto mb = marginal_bounds(tree.instance().num_colours(), t);
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    if (tree.node(i).status != NodeStatus::Internal) continue;
    const auto s = tree.state_at(i);
    for (const auto* side : {&s.x, &s.y}) {
      if (count_extensions(tree.instance(), *side) == 0) continue;
      for (const auto& p : conditional_marginal(tree.instance(), *side, tree.node(i).next)) {
        if (p < mb.lower || p > mb.upper) return false;
      }
    }
  }
  return true;
}

TEST(TrueValues, SatisfyConstraintsOnRandomTrees) {
  Rng rng(41);
  int checked = 0;
  while (checked < 80) {
    const auto cs = random_case(rng);
    if (!cs) continue;
    const std::size_t k2 = rng() % 2;
    if (k2 >= cs->inst.min_edge_size()) continue;
    const auto tree = full_tree(cs->inst, cs->v, cs->c1, cs->c2, k2);
    const auto tv = true_lp_values(tree);
    EXPECT_EQ(tv.ratio, oracle_ratio(cs->inst, cs->v, cs->c1, cs->c2));
    for (const Rational t : {Rational(5), Rational(10), Rational(100)}) {
      const auto rep = check_truth(tree, tv, t);
      EXPECT_TRUE(rep.leaf_ratio_ok) << rep.first_failure << "\n" << serialize(cs->inst);
      EXPECT_TRUE(rep.mass_ok) << rep.first_failure;
      if (marginals_within_bounds(tree, t)) EXPECT_TRUE(rep.off_diagonal_ok) << rep.first_failure;
    }
    ++checked;
  }
}

TEST(BinarySearch, SymmetricRatioIsBracketed) {
  const auto tree = full_tree(single_edge(), 0, 0, 1);
  const auto br = binary_search_ratio(tree, {0.5, 2.0, 0.0}, 0.05, 5.0, kTol);
  EXPECT_LE(br.r_lo, 1.0);
  EXPECT_GE(br.r_hi, 1.0);
  EXPECT_LE(std::log(br.r_hi / br.r_lo), 0.05 + 1e-12);
}

TEST(BinarySearch, WidthAlreadyMet) {
  const auto tree = full_tree(single_edge(), 0, 0, 1);
  SearchStats stats;
  const auto br = binary_search_ratio(tree, {0.5, 2.0, 0.0}, std::log(4.0), 5.0, kTol, &stats);
  EXPECT_EQ(br.r_lo, 0.5);
  EXPECT_EQ(br.r_hi, 2.0);
  EXPECT_EQ(stats.feasibility_checks, 1u);
}

TEST(BinarySearch, PinnedEdgeThreeQuarters) {
  const auto tree = full_tree(pinned_edge(), 0, 0, 1);
  const auto br = binary_search_ratio(tree, {0.5, 2.0, 0.0}, std::log(1.1), 5.0, kTol);
  EXPECT_LE(std::exp(-br.gamma) * br.r_lo, 0.75);
  EXPECT_GE(std::exp(br.gamma) * br.r_hi, 0.75);
}

TEST(BinarySearch, DistinctErrors) {
  const auto root_only = build_tree(single_edge(), 0, 0, 1, 3, 0, 1);
  try {
    binary_search_ratio(root_only, {0.5, 2.0, 0.0}, 0.1, 5.0, kTol);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::VacuousSystem);
  }
  const auto tree = full_tree(single_edge(), 0, 0, 1);
  try {
    binary_search_ratio(tree, {2.0, 3.0, 0.0}, 0.1, 5.0, kTol);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InitialInfeasible);
  }
}

TEST(BinarySearch, SoundOnRandomFullTrees) {
  Rng rng(53);
  int checked = 0;
  while (checked < 40) {
    const auto cs = random_case(rng);
    if (!cs) continue;
    const auto tree = full_tree(cs->inst, cs->v, cs->c1, cs->c2);
    const double truth = to_double(oracle_ratio(cs->inst, cs->v, cs->c1, cs->c2));
    const auto br = binary_search_ratio(tree, {1e-3, 1e3, 0.0}, 0.05, 5.0, kTol);
    EXPECT_LE(br.r_lo * std::exp(-br.gamma), truth * (1 + 1e-9));
    EXPECT_GE(br.r_hi * std::exp(br.gamma), truth * (1 - 1e-9));
    ++checked;
  }
}

AlgoParams desk_params(const Instance& inst) {
  AlgoParams p;
  p.k1 = inst.min_edge_size();
  p.k2 = 0;
  p.t_star = 5.0;
  p.L = inst.num_vertices() + 1;
  return p;
}

TEST(EstimateMarginal, PinnedEdgeThreeSevenths) {
  const auto inst = pinned_edge();
  const double eps = 0.1;
  const auto est = estimate_marginal(inst, 0, 0, eps, desk_params(inst));
  EXPECT_LE(std::abs(std::log(est.p_hat) - std::log(3.0 / 7.0)), eps);
  EXPECT_LE(est.bracket_lo, 3.0 / 7.0);
  EXPECT_GE(est.bracket_hi, 3.0 / 7.0);
  EXPECT_EQ(est.ratios.size(), 1u);
  EXPECT_GT(est.tree_nodes, 0u);
}

TEST(EstimateMarginal, SymmetricInstance) {
  const auto inst = make_instance(4, 3, {{0, 1, 2}, {1, 2, 3}});
  const double eps = 0.05;
  const auto est = estimate_marginal(inst, 0, 2, eps, desk_params(inst));
  EXPECT_LE(std::abs(std::log(est.p_hat * 3.0)), eps);
}

TEST(EstimateMarginal, ThreadsDoNotChangeTheResult) {
  const auto inst = make_instance(4, 3, {{0, 1, 2}, {1, 2, 3}}, {{1}});
  MarginalOptions one, four;
  four.threads = 4;
  const auto a = estimate_marginal(inst, 1, 0, 0.1, desk_params(inst), one);
  const auto b = estimate_marginal(inst, 1, 0, 0.1, desk_params(inst), four);
  EXPECT_EQ(a.p_hat, b.p_hat);
  EXPECT_EQ(a.tree_nodes, b.tree_nodes);
  EXPECT_EQ(a.lp_constraints, b.lp_constraints);
}

TEST(EstimateMarginal, AccuracyOnRandomInstances) {
  Rng rng(67);
  int checked = 0;
  while (checked < 30) {
    const auto cs = random_case(rng, 3);
    if (!cs) continue;
    const double eps = 0.2;
    const auto est = estimate_marginal(cs->inst, cs->v, cs->c1, eps, desk_params(cs->inst));
    const double truth = to_double(brute_marginal(cs->inst, cs->v, cs->c1));
    EXPECT_LE(std::abs(std::log(est.p_hat) - std::log(truth)), eps) << serialize(cs->inst);
    ++checked;
  }
}

TEST(EstimateMarginal, InitialBracketFromMarginalBounds) {
  const auto sparse = make_instance(6, 40, {{0, 1, 2}, {3, 4, 5}});
  const auto br = initial_ratio_bracket(sparse, 1e-6);
  EXPECT_LT(br.r_lo, 1.0);
  EXPECT_GT(br.r_lo, 0.5);
  EXPECT_NEAR(br.r_lo * br.r_hi, 1.0, 1e-12);
  const auto dense = make_instance(4, 2, {{0, 1, 2}, {1, 2, 3}});
  EXPECT_EQ(initial_ratio_bracket(dense, 1e-6).r_lo, 1e-6);
}

}  // namespace
}  // namespace chromatic
