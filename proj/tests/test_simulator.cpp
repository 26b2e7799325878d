#include <gtest/gtest.h>

#include <cmath>

#include "bandit_lb/simulator.hpp"

using namespace bandit_lb;

TEST(RunOnce, DiracGreedyCommitsAfterInit) {
  const BanditProblem nu({Dirac{1.0}, Dirac{0.0}}, ModelTag::dirac);
  const auto r = run_once(nu, {"greedy", {}}, 50, 1);
  EXPECT_EQ(r.final_counts, (std::vector<std::uint64_t>{49, 1}));
  EXPECT_DOUBLE_EQ(r.regret.back(), 1.0);
}

TEST(RunOnce, CountsConserveAndRegretIsMonotone) {
  const auto nu = bernoulli_problem({0.2, 0.5, 0.45, 0.1});
  std::vector<std::uint64_t> cps;
  for (std::uint64_t t = 1; t <= 400; t += 3) cps.push_back(t);
  const auto r = run_once(nu, {"ucb", {}}, 400, 17, cps);
  for (std::size_t c = 0; c < cps.size(); ++c) {
    std::uint64_t n = 0;
    for (auto x : r.checkpoint_counts[c]) n += x;
    EXPECT_EQ(n, cps[c]);
    if (c > 0) {
      EXPECT_GE(r.regret[c], r.regret[c - 1]);
    }
  }
  double exact = 0.0;
  for (std::size_t a = 0; a < 4; ++a) exact += nu.gap(a) * static_cast<double>(r.final_counts[a]);
  EXPECT_EQ(r.regret.back(), exact);
}

TEST(RunOnce, RejectsBadCheckpoints) {
  const auto nu = bernoulli_problem({0.2, 0.5});
  EXPECT_THROW(run_once(nu, {"ucb", {}}, 10, 1, {5, 5}), DomainError);
  EXPECT_THROW(run_once(nu, {"ucb", {}}, 10, 1, {11}), DomainError);
  EXPECT_THROW(run_once(nu, {"ucb", {}}, 0, 1), DomainError);
}

TEST(RunOnce, UniformCountsStayInBinomialBand) {
  // sd of N_a(10^4) under uniform play on 4 arms is sqrt(10^4 * 3/16) = 43.30
  const auto nu = bernoulli_problem({0.5, 0.4, 0.3, 0.2});
  const auto r = run_once(nu, {"uniform", {}}, 10000, 2024);
  for (auto n : r.final_counts) {
    EXPECT_GE(n, 2327u);
    EXPECT_LE(n, 2673u);
  }
}

TEST(MonteCarlo, UniformRegretIsLinear) {
  const auto nu = bernoulli_problem({0.5, 0.4, 0.3, 0.2});
  const auto agg = monte_carlo(nu, {"uniform", {}}, 10000, 100, 3, {}, 1);
  EXPECT_NEAR(agg.mean_regret.back(), 1500.0, 4 * agg.stderr_regret.back());
}

TEST(MonteCarlo, SeedReplayIsExact) {
  const auto nu = bernoulli_problem({0.3, 0.5});
  const auto a = monte_carlo_runs(nu, {"thompson", {}}, 300, 20, 42, {100, 300}, 1);
  const auto b = monte_carlo_runs(nu, {"thompson", {}}, 300, 20, 42, {100, 300}, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[7], run_once(nu, {"thompson", {}}, 300, derive_run_seeds(42, 7).run_seed, {100, 300}));
}

TEST(MonteCarlo, SingleRunHasZeroStderr) {
  const auto agg = monte_carlo(bernoulli_problem({0.3, 0.5}), {"ucb", {}}, 10, 1, 1);
  EXPECT_EQ(agg.runs, 1u);
  EXPECT_EQ(agg.stderr_regret.back(), 0.0);
}

TEST(MonteCarlo, StderrScalesAsInverseRoot) {
  const auto nu = bernoulli_problem({0.5, 0.45});
  const auto a = monte_carlo(nu, {"uniform", {}}, 200, 1000, 8, {}, 1);
  const auto b = monte_carlo(nu, {"uniform", {}}, 200, 4000, 9, {}, 1);
  EXPECT_NEAR(b.stderr_regret.back() / a.stderr_regret.back(), 0.5, 0.1);
}

TEST(MonteCarlo, IndexOfCheckpoint) {
  const auto agg = monte_carlo(bernoulli_problem({0.3, 0.5}), {"ucb", {}}, 20, 2, 1, {5, 20}, 1);
  EXPECT_EQ(agg.index_of(20), 1u);
  EXPECT_THROW(agg.index_of(6), DomainError);
}

TEST(MonteCarlo, FailuresNameTheRun) {
  // Any Exp(1) draw above 1.005 overflows when scaled by this mean.
  const BanditProblem nu({Gamma{1.0, 1.79e308}, Gamma{1.0, 1e308}});
  try {
    monte_carlo_runs(nu, {"ucb", {}}, 50, 3, 1, {50}, 1);
    FAIL() << "expected SimulationError";
  } catch (const SimulationError& e) {
    EXPECT_EQ(e.run_index(), 0u);
    EXPECT_NE(std::string(e.what()).find("run 0"), std::string::npos);
  }
}

TEST(MonteCarlo, ConfigErrorsSurfaceDirectly) {
  EXPECT_THROW(monte_carlo_runs(bernoulli_problem({0.3, 0.5}), {"nope", {}}, 5, 2, 1, {5}), ConfigError);
  EXPECT_THROW(monte_carlo_runs(bernoulli_problem({0.3, 0.5}), {"ucb", {}}, 5, 0, 1, {5}), DomainError);
}

TEST(MeanStderr, Values) {
  const auto m = mean_stderr({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.stderr_, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
}

TEST(DefinitionChecks, RequireSuitableProblems) {
  const auto nu = bernoulli_problem({0.5, 0.3});
  EXPECT_THROW(empirical_definition_checks(nu, {"ucb", {}}, 10, 10, 1, {DefinitionCheckKind::pairwise_symmetry}),
               ConfigError);
  EXPECT_THROW(empirical_definition_checks(bernoulli_problem({0.5, 0.5}), {"ucb", {}}, 10, 10, 1,
                                           {DefinitionCheckKind::monotonicity}),
               ConfigError);
}

TEST(DefinitionChecks, DiracGreedyIsSmarterThanUniform) {
  const BanditProblem nu({Dirac{1.0}, Dirac{0.0}, Dirac{0.0}}, ModelTag::dirac);
  const auto checks = empirical_definition_checks(nu, {"greedy", {}}, 30, 5, 1);
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_EQ(checks[0].estimate, 28.0);
  EXPECT_FALSE(checks[0].violated);
}

TEST(DefinitionChecks, FlagsGreedyStuckOnTheWorseArm) {
  // Both arms usually pay 0 at first; the tie keeps greedy on arm 1 for good.
  const auto nu = bernoulli_problem({0.05, 0.1});
  const auto checks = empirical_definition_checks(nu, {"greedy", {}}, 40, 200, 1, {DefinitionCheckKind::smarter_than_uniform}, 1);
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_LT(checks[0].estimate, 20.0);
  EXPECT_TRUE(checks[0].violated);
}
