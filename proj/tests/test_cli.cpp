#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "chromatic/cli.hpp"
#include "support.hpp"

namespace chromatic {
namespace {

using chromatic::testing::fixture;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const Result& r) { return nlohmann::json::parse(r.out); }

TEST(Cli, CountOnChainIsNearLog66) {
  const auto r = run({"count", "--eps", "0.2", "--seed", "7", fixture("chain.hg")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = parse(r);
  EXPECT_NEAR(j["log_estimate"].get<double>(), std::log(66.0), 0.2);
}

TEST(Cli, CountInOracleModeIsExact) {
  const auto r = run({"count", "--eps", "0.2", "--seed", "7", "--oracle-marginals", fixture("chain.hg")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(parse(r)["exact"], "66");
}

TEST(Cli, CheckRegimeAtThreshold) {
  auto j = parse(run({"check-regime", "--k", "28", "--delta", "2", "--q", "715", "--mode", "counting"}));
  EXPECT_TRUE(j["in_regime"].get<bool>());
  j = parse(run({"check-regime", "--k", "28", "--delta", "2", "--q", "714", "--mode", "counting"}));
  EXPECT_FALSE(j["in_regime"].get<bool>());
}

TEST(Cli, CheckRegimeTableFormat) {
  const auto r = run({"check-regime", "--k", "28", "--delta", "2", "--q", "715", "--format", "table"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("in_regime yes", 0), 0u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"oracle-count", "/nonexistent/file.hg"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"count", "--eps", "0.2", fixture("chain.hg")}).code, kExitUsage);  // seed missing
  EXPECT_EQ(run({"oracle-count", "--budget-bits", "1", fixture("chain.hg")}).code, kExitFailure);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, EveryDocumentCarriesHeaderFields) {
  const auto j = parse(run({"oracle-count", fixture("single_edge.hg")}));
  EXPECT_EQ(j["tool_version"], kToolVersion);
  EXPECT_TRUE(j.contains("config_echo"));
  EXPECT_EQ(j["wall_ms"].get<double>(), 0.0);
  EXPECT_EQ(j["count"], "6");
}

TEST(Cli, MarginalOnPinnedEdge) {
  const auto r = run({"marginal", "--vertex", "0", "--colour", "0", "--eps", "0.1", fixture("single_edge_pinned.hg")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = parse(r);
  EXPECT_NEAR(std::log(j["p_hat"].get<double>()), std::log(3.0 / 7.0), 0.1);
  EXPECT_LE(j["bracket_lo"].get<double>(), 3.0 / 7.0);
  EXPECT_GE(j["bracket_hi"].get<double>(), 3.0 / 7.0);
}

std::vector<std::vector<std::string>> all_subcommands() {
  const std::string chain = fixture("chain.hg");
  const std::string edge = fixture("single_edge.hg");
  return {
      {"count", "--eps", "0.2", "--seed", "7", chain},
      {"sample", "--eps", "0.2", "--seed", "7", "--samples", "20", edge},
      {"sample", "--eps", "0.2", "--seed", "7", "--samples", "200", "--histogram", edge},
      {"marginal", "--vertex", "1", "--colour", "2", "--eps", "0.1", chain},
      {"oracle-count", chain},
      {"oracle-marginal", "--vertex", "1", chain},
      {"oracle-sample", "--seed", "7", "--samples", "10", chain},
      {"find-colouring", "--seed", "7", chain},
      {"base-colouring", "--k1c", "1", "--seed", "7", chain},
      {"check-regime", "--k", "30", "--delta", "3", "--q", "1000", "--mode", "sampling"},
      {"couple-sim", "--seed", "7", "--runs", "100", "--vertex", "1", chain},
      {"tree-dump", "--vertex", "1", chain},
      {"tree-stats", "--max-size", "3", chain},
  };
}

TEST(Cli, FixedSeedGivesByteIdenticalOutput) {
  for (auto args : all_subcommands()) {
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, kExitOk) << args.front() << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << args.front();
    args.push_back("--threads");
    args.push_back("4");
    const auto c = run(args);
    EXPECT_EQ(a.out, c.out) << args.front() << " with threads";
  }
}

TEST(Cli, DifferentSeedsDiffer) {
  const auto a = run({"oracle-sample", "--seed", "1", "--samples", "20", fixture("chain.hg")});
  const auto b = run({"oracle-sample", "--seed", "2", "--samples", "20", fixture("chain.hg")});
  EXPECT_NE(a.out, b.out);
}

}  // namespace
}  // namespace chromatic
