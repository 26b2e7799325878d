#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bandit_lb/simulator.hpp"
#include "bandit_lb/strategies.hpp"

using namespace bandit_lb;

namespace {
/// Replays a fixed list of draws and counts how many were taken.
struct Script {
  std::vector<double> draws;
  std::size_t used = 0;
  double uniform() { return draws.at(used++); }
};

template <class S>
std::size_t step(Strategy& s, S& src, double reward) {
  const std::size_t a = s.choose(src);
  s.update(a, reward);
  return a;
}
}  // namespace

TEST(Strategy, IndexPoliciesInitializeInOrder) {
  for (auto s : {Strategy::ucb(4), Strategy::kl_ucb(4), Strategy::greedy(4), Strategy::coin_greedy(4),
                 Strategy::known_mu_star(4, 0.5)}) {
    Script src;
    for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(step(s, src, 0.0), a) << s.id();
    EXPECT_EQ(src.used, 0u) << s.id();
  }
}

TEST(Strategy, UniformMapsCellsToArms) {
  Strategy s = Strategy::uniform(3);
  Script src{{0.0, 0.34, 0.67, 0.999999}};
  EXPECT_EQ(step(s, src, 0.0), 0u);
  EXPECT_EQ(step(s, src, 0.0), 1u);
  EXPECT_EQ(step(s, src, 0.0), 2u);
  EXPECT_EQ(step(s, src, 0.0), 2u);
  EXPECT_EQ(src.used, 4u);
}

TEST(Strategy, UniformFrequencies) {
  Strategy s = Strategy::uniform(4);
  Rng rng(7);
  std::vector<double> n(4);
  const int T = 40000;
  for (int t = 0; t < T; ++t) n[step(s, rng, 0.0)] += 1.0;
  // binomial sd of one count is sqrt(T * 3/16) = 86.6
  for (double c : n) EXPECT_NEAR(c, T / 4.0, 4 * 86.6);
}

TEST(Strategy, StreamingMeans) {
  Strategy s = Strategy::greedy(2);
  Script src;
  s.update(s.choose(src), 1.0);
  s.update(s.choose(src), 0.25);
  s.update(s.choose(src), 0.0);  // greedy picks arm 0
  EXPECT_EQ(s.stats().counts, (std::vector<std::uint64_t>{2, 1}));
  EXPECT_DOUBLE_EQ(s.stats().means[0], 0.5);
  EXPECT_DOUBLE_EQ(s.stats().means[1], 0.25);
  EXPECT_EQ(s.next_round(), 4u);
}

TEST(Strategy, ContractViolations) {
  Strategy s = Strategy::ucb(2);
  Script src;
  const auto a = s.choose(src);
  EXPECT_THROW(s.choose(src), ContractViolation);
  EXPECT_THROW(s.update(a + 1, 0.0), ContractViolation);
  EXPECT_NO_THROW(s.update(a, 0.0));
  EXPECT_THROW(s.update(a, 0.0), ContractViolation);
  EXPECT_THROW(Strategy::ucb(2).known_mu_star_candidates(), ContractViolation);
}

TEST(Strategy, TiesGoToLowestIndex) {
  Strategy s = Strategy::ucb(3);
  Script src;
  for (int i = 0; i < 3; ++i) step(s, src, 0.5);
  EXPECT_EQ(step(s, src, 0.5), 0u);
}

TEST(Strategy, GreedyFollowsEmpiricalMean) {
  Strategy s = Strategy::greedy(3);
  Script src;
  step(s, src, 0.2);
  step(s, src, 0.9);
  step(s, src, 0.4);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(step(s, src, 0.9), 1u);
}

TEST(Strategy, CoinGreedyUsesOneDrawAfterInit) {
  Strategy s = Strategy::coin_greedy(2);
  Script src{{0.25, 0.75}};
  step(s, src, 1.0);
  step(s, src, 0.0);
  EXPECT_EQ(step(s, src, 1.0), 0u);  // U < 1/2: greedy
  EXPECT_EQ(step(s, src, 1.0), 1u);  // U >= 1/2: least pulled
  EXPECT_EQ(src.used, 2u);
}

TEST(KnownMuStar, CandidateThreshold) {
  // mu_hat - mu* > -sqrt(4 ln N / N); at N = 100 the threshold is -0.429193
  ArmStats st(2);
  st.counts = {100, 100};
  st.means = {0.5 - 0.42, 0.5 - 0.44};
  EXPECT_EQ(Strategy::candidates(st, 0.5), (std::vector<std::size_t>{0}));
  EXPECT_NEAR(-std::sqrt(4.0 * std::log(100.0) / 100.0), -0.429193, 1e-6);
}

TEST(KnownMuStar, SinglePullThresholdIsZero) {
  ArmStats st(2);
  st.counts = {1, 1};
  st.means = {0.5, 0.4999};
  EXPECT_EQ(Strategy::candidates(st, 0.5), (std::vector<std::size_t>{}));
  st.means = {0.5001, 0.0};
  EXPECT_EQ(Strategy::candidates(st, 0.5), (std::vector<std::size_t>{0}));
}

TEST(KnownMuStar, EmptyCandidateSetForcesRoundRobin) {
  Strategy s = Strategy::known_mu_star(3, 10.0);
  Script src;
  for (int i = 0; i < 3; ++i) step(s, src, 0.0);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(step(s, src, 0.0), a);
  EXPECT_EQ(src.used, 0u);
}

TEST(KnownMuStar, DrawsUniformlyAmongCandidates) {
  Strategy s = Strategy::known_mu_star(3, 0.5);
  Script src{{0.1, 0.6}};
  step(s, src, 0.9);
  step(s, src, 0.0);
  step(s, src, 0.9);
  EXPECT_EQ(s.known_mu_star_candidates(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(step(s, src, 0.9), 0u);
  EXPECT_EQ(step(s, src, 0.9), 2u);
}

TEST(KlUcb, RespectsUpperBound) {
  Strategy s = Strategy::kl_ucb(2, 2.0);
  Script src;
  step(s, src, 2.0);
  step(s, src, 0.0);
  EXPECT_EQ(step(s, src, 2.0), 0u);
  EXPECT_THROW(Strategy::kl_ucb(2, 0.0), DomainError);
}

TEST(Strategy, ExactOnAlphabet) {
  EXPECT_TRUE(Strategy::uniform(2).exact_on_alphabet(4));
  EXPECT_FALSE(Strategy::uniform(3).exact_on_alphabet(4));
  EXPECT_TRUE(Strategy::ucb(3).exact_on_alphabet(1));
  EXPECT_FALSE(Strategy::thompson_bernoulli(2).exact_on_alphabet(4));
  EXPECT_TRUE(Strategy::known_mu_star(2, 0.5).exact_on_alphabet(2));
  EXPECT_FALSE(Strategy::known_mu_star(3, 0.5).exact_on_alphabet(4));
  EXPECT_TRUE(Strategy::coin_greedy(3).exact_on_alphabet(2));
}

TEST(MakeStrategy, ParsesIdsAndParameters) {
  for (const auto& id : strategy_ids()) {
    StrategySpec spec{id, {}};
    if (id == "known_mu_star") spec.params["mu_star"] = 0.5;
    EXPECT_EQ(make_strategy(spec, 3).id(), id);
  }
  EXPECT_THROW(make_strategy({"known_mu_star", {}}, 2), ConfigError);
  EXPECT_THROW(make_strategy({"ucb", {{"upper", 1.0}}}, 2), ConfigError);
  EXPECT_THROW(make_strategy({"epsilon_greedy", {}}, 2), ConfigError);
}

TEST(Replay, SameSeedSameTrajectory) {
  const auto nu = bernoulli_problem({0.3, 0.5, 0.4});
  for (const auto& id : {"uniform", "thompson", "coin_greedy"}) {
    const auto a = run_once(nu, {id, {}}, 500, 99, {10, 100, 500});
    const auto b = run_once(nu, {id, {}}, 500, 99, {10, 100, 500});
    EXPECT_EQ(a, b) << id;
    EXPECT_NE(a.final_counts, run_once(nu, {id, {}}, 500, 100).final_counts) << id;
  }
}

// Each strategy, run on two optimal arms with equal laws, should treat them alike.
// Index strategies use continuous rewards so exact ties (and the lowest-index
// rule) are not exercised after initialization.
TEST(LabelSymmetry, EqualArmsAreSymmetric) {
  struct Case {
    StrategySpec spec;
    BanditProblem nu;
  };
  const std::vector<Case> cases{
      {{"uniform", {}}, bernoulli_problem({0.5, 0.5, 0.2})},
      {{"thompson", {}}, bernoulli_problem({0.5, 0.5, 0.2})},
      {{"ucb", {}}, BanditProblem({Gaussian{0.5, 1.0}, Gaussian{0.5, 1.0}, Gaussian{0.2, 1.0}})},
      {{"known_mu_star", {{"mu_star", 0.5}}},
       BanditProblem({Gaussian{0.5, 1.0}, Gaussian{0.5, 1.0}, Gaussian{0.2, 1.0}})},
  };
  for (const auto& c : cases) {
    const auto checks =
        empirical_definition_checks(c.nu, c.spec, 30, 10000, 5, {DefinitionCheckKind::pairwise_symmetry}, 1);
    ASSERT_EQ(checks.size(), 1u);
    EXPECT_FALSE(checks[0].violated) << c.spec.id << " z=" << checks[0].z;
  }
}

TEST(SmarterThanUniform, FigureOneProblem) {
  const auto nu = figure1_problem();
  const std::vector<StrategySpec> specs{
      {"ucb", {}}, {"kl_ucb", {}}, {"thompson", {}}, {"known_mu_star", {{"mu_star", 0.05}}}, {"uniform", {}}};
  for (const auto& spec : specs)
    for (std::uint64_t T : {120u, 1200u}) {
      const auto checks = empirical_definition_checks(nu, spec, T, 200, 11, {DefinitionCheckKind::smarter_than_uniform}, 1);
      ASSERT_EQ(checks.size(), 1u);
      for (const auto& c : checks) EXPECT_FALSE(c.violated) << spec.id << " T=" << T << " z=" << c.z;
    }
}

TEST(Monotonicity, ThompsonGainsWhenSuboptimalArmsDrop) {
  const auto nu = bernoulli_problem({0.6, 0.5, 0.2});
  const auto checks =
      empirical_definition_checks(nu, {"thompson", {}}, 200, 400, 3, {DefinitionCheckKind::monotonicity}, 1);
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_FALSE(checks[0].violated) << checks[0].z;
  EXPECT_GT(checks[0].estimate, checks[0].reference);
}
