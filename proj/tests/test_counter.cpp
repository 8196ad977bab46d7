#include <gtest/gtest.h>

#include <cmath>

#include "chromatic/counter.hpp"
#include "chromatic/lll.hpp"
#include "support.hpp"

namespace chromatic {
namespace {

using testing::brute_count;
using testing::fixture;
using testing::make_instance;
using testing::random_instance;

AlgoParams desk(const Instance& inst, double eps) {
  return resolve_params(inst, eps / static_cast<double>(inst.num_vertices()), Mode::Counting).params;
}

TEST(PinnedSequence, NoEdges) {
  const auto inst = make_instance(4, 3, {});
  const auto seq = pinned_sequence(inst, FullColouring(4, 0), 1);
  EXPECT_TRUE(seq.steps.empty());
  EXPECT_EQ(seq.free_vertices, 4u);
}

TEST(PinnedSequence, SingleEdgeSatisfiedAtSecondPin) {
  const auto inst = make_instance(3, 2, {{0, 1, 2}});
  const auto seq = pinned_sequence(inst, {0, 1, 0}, 1);
  ASSERT_EQ(seq.steps.size(), 2u);
  EXPECT_EQ(seq.steps[0].vertex, 0u);
  EXPECT_EQ(seq.steps[1].vertex, 1u);
  EXPECT_EQ(seq.steps[1].instance.num_edges(), 1u);
  EXPECT_EQ(seq.free_vertices, 1u);
}

TEST(PinnedSequence, DetectsPrefixViolation) {
  const auto inst = make_instance(3, 2, {{0, 1, 2}});
  EXPECT_THROW(pinned_sequence(inst, {0, 0, 0}, 1), Error);
  EXPECT_THROW(pinned_sequence(inst, {0, 0, 1}, 2), Error);
}

TEST(PinnedSequence, EdgeSizesStayAboveK1OnRandomInstances) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_instance(rng, 9, 3, 4, 4, 4);
    const std::size_t k1c = 1 + rng() % 2;
    const auto base = good_base_colouring(inst, k1c, rng, 100000);
    const auto seq = pinned_sequence(inst, base.colouring, k1c);
    for (const auto& step : seq.steps) {
      for (const auto& e : step.instance.edges()) EXPECT_GE(e.vertices.size(), k1c);
    }
    EXPECT_EQ(seq.steps.size() + seq.free_vertices, inst.num_vertices());
  }
}

TEST(Count, NoEdgesIsExact) {
  const auto inst = make_instance(4, 3, {});
  Rng rng(1);
  const auto est = count(inst, 0.1, desk(inst, 0.1), rng);
  EXPECT_NEAR(est.log_estimate, std::log(81.0), 1e-12);
  EXPECT_EQ(est.free_vertices, 4u);
}

TEST(Count, SingleEdgeAndChain) {
  for (const auto& [name, truth] : {std::pair{"single_edge.hg", 6.0}, std::pair{"chain.hg", 66.0}}) {
    const auto inst = load_instance(fixture(name));
    Rng rng(7);
    const auto est = count(inst, 0.2, desk(inst, 0.2), rng);
    EXPECT_LE(std::abs(est.log_estimate - std::log(truth)), 0.2) << name;
  }
}

TEST(Count, OracleMarginalsTelescopeExactly) {
  Rng rng(11);
  CountOptions opts;
  opts.oracle_marginals = true;
  opts.max_resamples = 20000;
  int checked = 0;
  while (checked < 40) {
    const auto inst = random_instance(rng, 4 + rng() % 5, 2 + static_cast<int>(rng() % 2), 1 + rng() % 4, 3, 3);
    CountEstimate est;
    try {
      est = count(inst, 0.1, desk(inst, 0.1), rng, opts);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::ResampleLimit);  // no prefix-proper colouring exists
      continue;
    }
    ++checked;
    ASSERT_TRUE(est.exact.has_value());
    EXPECT_EQ(*est.exact, Rational(brute_count(inst)));
  }
}

TEST(Count, StepErrorsStayWithinBudget) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(rng, 5 + rng() % 3, 2, 2 + rng() % 2, 3, 3);
    const double eps = 0.2;
    Rng a(trial), b(trial);
    CountOptions oracle;
    oracle.oracle_marginals = true;
    const auto est = count(inst, eps, desk(inst, eps), a);
    const auto exact = count(inst, eps, desk(inst, eps), b, oracle);
    ASSERT_EQ(est.per_step.size(), exact.per_step.size());
    double total = 0.0;
    for (std::size_t i = 0; i < est.per_step.size(); ++i) {
      const double err = std::abs(std::log(est.per_step[i].p_hat) - std::log(exact.per_step[i].p_hat));
      EXPECT_LE(err, eps / static_cast<double>(inst.num_vertices()));
      total += err;
    }
    EXPECT_LE(std::abs(est.log_estimate - exact.log_estimate), total + 1e-9);
    EXPECT_LE(total, eps);
  }
}

TEST(Count, DeterministicGivenSeed) {
  const auto inst = load_instance(fixture("chain.hg"));
  Rng a(5), b(5);
  const auto x = count(inst, 0.2, desk(inst, 0.2), a);
  const auto y = count(inst, 0.2, desk(inst, 0.2), b);
  EXPECT_EQ(x.log_estimate, y.log_estimate);
  EXPECT_EQ(x.base_colouring, y.base_colouring);
  ASSERT_EQ(x.per_step.size(), y.per_step.size());
  for (std::size_t i = 0; i < x.per_step.size(); ++i) EXPECT_EQ(x.per_step[i].p_hat, y.per_step[i].p_hat);
}

}  // namespace
}  // namespace chromatic
