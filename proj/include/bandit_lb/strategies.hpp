#pragma once
/// \file strategies.hpp
/// Sequential bandit strategies behind one choose/update contract.
///
/// Arms are 0-based internally; round indices t are 1-based (t = 1 + number
/// of updates so far). A strategy never owns its randomization stream: the
/// caller passes a UniformSource to choose(), which lets the simulator feed a
/// seeded RNG and the exact verifier feed a discretized alphabet.
///
/// Draws consumed per call to choose():
///   uniform        1
///   ucb, kl_ucb    0
///   greedy         0
///   coin_greedy    0 during initialization, 1 afterwards
///   known_mu_star  0 during initialization or a forced round-robin, else 1
///   thompson       K Beta samples (several uniforms each)
/// Ties in every argmax go to the lowest arm index.

#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "divergence.hpp"
#include "errors.hpp"
#include "random.hpp"

namespace bandit_lb {

/// Per-arm statistics shared by every strategy.
struct ArmStats {
  std::vector<std::uint64_t> counts;
  std::vector<double> means;  // streaming means, valid once counts[a] >= 1
  std::vector<double> sums;
  std::uint64_t rounds = 0;

  explicit ArmStats(std::size_t k = 0) : counts(k, 0), means(k, 0.0), sums(k, 0.0) {}
  std::size_t arms() const noexcept { return counts.size(); }
};

struct UniformPolicy {};
/// Index mu_hat + sqrt(2 ln t / N_a) after one forced pull per arm.
struct UcbPolicy {};
/// Index max{q in [mu_hat, upper] : N_a kl(mu_hat/upper, q/upper) <= ln t}.
struct KlUcbPolicy {
  double upper = 1.0;
};
/// Beta(1 + S_a, 1 + N_a - S_a) posterior sampling.
struct ThompsonPolicy {};
/// Bounded-regret algorithm for a known optimal mean.
struct KnownMuStarPolicy {
  double mu_star = 0.0;
  std::deque<std::size_t> forced;  // pending round-robin pulls
};
/// Empirical-mean argmax after one forced pull per arm.
struct GreedyPolicy {};
/// After initialization: with U < 1/2 play the greedy arm, else the least-pulled arm.
struct CoinGreedyPolicy {};

using Policy =
    std::variant<UniformPolicy, UcbPolicy, KlUcbPolicy, ThompsonPolicy, KnownMuStarPolicy, GreedyPolicy, CoinGreedyPolicy>;

/// Strategy id plus string parameters, as written in experiment configs.
struct StrategySpec {
  std::string id = "thompson";
  std::map<std::string, double> params;
  bool operator==(const StrategySpec&) const = default;
};

namespace detail {
inline std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}
inline std::size_t pick_cell(double u, std::size_t n) {
  const auto i = static_cast<std::size_t>(u * static_cast<double>(n));
  return i < n ? i : n - 1;
}
inline std::uint64_t lcm_upto(std::uint64_t k) {
  std::uint64_t l = 1;
  for (std::uint64_t i = 2; i <= k; ++i) l = std::lcm(l, i);
  return l;
}
}  // namespace detail

class Strategy {
 public:
  Strategy(std::size_t arms, Policy policy) : stats_(arms), policy_(std::move(policy)) {
    if (arms < 1) throw DomainError("Strategy: need at least one arm");
  }

  static Strategy uniform(std::size_t k) { return {k, UniformPolicy{}}; }
  static Strategy ucb(std::size_t k) { return {k, UcbPolicy{}}; }
  static Strategy kl_ucb(std::size_t k, double upper = 1.0) {
    if (!(upper > 0.0)) throw DomainError("kl_ucb: reward upper bound must be > 0");
    return {k, KlUcbPolicy{upper}};
  }
  static Strategy thompson_bernoulli(std::size_t k) { return {k, ThompsonPolicy{}}; }
  static Strategy known_mu_star(std::size_t k, double mu_star) { return {k, KnownMuStarPolicy{mu_star, {}}}; }
  static Strategy greedy(std::size_t k) { return {k, GreedyPolicy{}}; }
  static Strategy coin_greedy(std::size_t k) { return {k, CoinGreedyPolicy{}}; }

  std::size_t arms() const noexcept { return stats_.arms(); }
  const ArmStats& stats() const noexcept { return stats_; }
  const Policy& policy() const noexcept { return policy_; }
  /// Round index of the next decision.
  std::uint64_t next_round() const noexcept { return stats_.rounds + 1; }

  std::string id() const {
    struct V {
      std::string operator()(const UniformPolicy&) const { return "uniform"; }
      std::string operator()(const UcbPolicy&) const { return "ucb"; }
      std::string operator()(const KlUcbPolicy&) const { return "kl_ucb"; }
      std::string operator()(const ThompsonPolicy&) const { return "thompson"; }
      std::string operator()(const KnownMuStarPolicy&) const { return "known_mu_star"; }
      std::string operator()(const GreedyPolicy&) const { return "greedy"; }
      std::string operator()(const CoinGreedyPolicy&) const { return "coin_greedy"; }
    };
    return std::visit(V{}, policy_);
  }

  template <UniformSource S>
  std::size_t choose(S& src) {
    if (pending_) throw ContractViolation("choose called twice without update");
    const std::size_t arm = std::visit([&](auto& p) { return decide(p, src); }, policy_);
    pending_ = arm;
    return arm;
  }

  void update(std::size_t arm, double reward) {
    if (!pending_ || *pending_ != arm)
      throw ContractViolation("update for arm " + std::to_string(arm) + " which was not the last chosen arm");
    pending_.reset();
    auto n = ++stats_.counts[arm];
    stats_.means[arm] += (reward - stats_.means[arm]) / static_cast<double>(n);
    stats_.sums[arm] += reward;
    ++stats_.rounds;
  }

  /// Candidate set of the known-mu* algorithm at the next round:
  /// {a : mu_hat_a - mu* > -sqrt(4 ln N_a / N_a)}. Requires N_a >= 1 for all a.
  std::vector<std::size_t> known_mu_star_candidates() const {
    const auto* p = std::get_if<KnownMuStarPolicy>(&policy_);
    if (!p) throw ContractViolation("known_mu_star_candidates: strategy is " + id());
    return candidates(stats_, p->mu_star);
  }

  static std::vector<std::size_t> candidates(const ArmStats& s, double mu_star) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < s.arms(); ++a) {
      if (s.counts[a] == 0) throw ContractViolation("known_mu_star_candidates: arm never pulled");
      const double n = static_cast<double>(s.counts[a]);
      if (s.means[a] - mu_star > -std::sqrt(4.0 * std::log(n) / n)) out.push_back(a);
    }
    return out;
  }

  /// Whether feeding the midpoints of R equiprobable cells as uniform draws
  /// reproduces the strategy's law exactly.
  bool exact_on_alphabet(std::uint64_t r) const {
    const std::uint64_t k = arms();
    struct V {
      std::uint64_t r, k;
      bool operator()(const UniformPolicy&) const { return r % k == 0; }
      bool operator()(const UcbPolicy&) const { return true; }
      bool operator()(const KlUcbPolicy&) const { return true; }
      bool operator()(const ThompsonPolicy&) const { return false; }
      bool operator()(const KnownMuStarPolicy&) const { return r % detail::lcm_upto(k) == 0; }
      bool operator()(const GreedyPolicy&) const { return true; }
      bool operator()(const CoinGreedyPolicy&) const { return r % 2 == 0; }
    };
    return std::visit(V{r, k}, policy_);
  }

 private:
  bool initializing() const { return stats_.rounds < stats_.arms(); }
  std::size_t init_arm() const { return static_cast<std::size_t>(stats_.rounds); }

  std::size_t greedy_arm() const { return detail::argmax_lowest(stats_.means); }

  template <class S>
  std::size_t decide(UniformPolicy&, S& src) {
    return detail::pick_cell(src.uniform(), arms());
  }

  template <class S>
  std::size_t decide(UcbPolicy&, S&) {
    if (initializing()) return init_arm();
    const double log_t = std::log(static_cast<double>(next_round()));
    std::vector<double> index(arms());
    for (std::size_t a = 0; a < arms(); ++a)
      index[a] = stats_.means[a] + std::sqrt(2.0 * log_t / static_cast<double>(stats_.counts[a]));
    return detail::argmax_lowest(index);
  }

  template <class S>
  std::size_t decide(KlUcbPolicy& p, S&) {
    if (initializing()) return init_arm();
    const double log_t = std::log(static_cast<double>(next_round()));
    std::vector<double> index(arms());
    for (std::size_t a = 0; a < arms(); ++a) {
      const double m = std::clamp(stats_.means[a] / p.upper, 0.0, 1.0);
      index[a] = p.upper * kl_upper_confidence(m, static_cast<double>(stats_.counts[a]), log_t);
    }
    return detail::argmax_lowest(index);
  }

  template <class S>
  std::size_t decide(ThompsonPolicy&, S& src) {
    std::vector<double> theta(arms());
    for (std::size_t a = 0; a < arms(); ++a) {
      const double s = stats_.sums[a];
      const double f = static_cast<double>(stats_.counts[a]) - s;
      theta[a] = sample::beta(src, 1.0 + s, 1.0 + f);
    }
    return detail::argmax_lowest(theta);
  }

  template <class S>
  std::size_t decide(KnownMuStarPolicy& p, S& src) {
    if (initializing()) return init_arm();
    if (p.forced.empty()) {
      const auto c = candidates(stats_, p.mu_star);
      if (!c.empty()) return c[detail::pick_cell(src.uniform(), c.size())];
      for (std::size_t a = 0; a < arms(); ++a) p.forced.push_back(a);
    }
    const std::size_t a = p.forced.front();
    p.forced.pop_front();
    return a;
  }

  template <class S>
  std::size_t decide(GreedyPolicy&, S&) {
    if (initializing()) return init_arm();
    return greedy_arm();
  }

  template <class S>
  std::size_t decide(CoinGreedyPolicy&, S& src) {
    if (initializing()) return init_arm();
    if (src.uniform() < 0.5) return greedy_arm();
    std::size_t least = 0;
    for (std::size_t a = 1; a < arms(); ++a)
      if (stats_.counts[a] < stats_.counts[least]) least = a;
    return least;
  }

  ArmStats stats_;
  Policy policy_;
  std::optional<std::size_t> pending_;
};

inline const std::vector<std::string>& strategy_ids() {
  static const std::vector<std::string> ids{"uniform", "ucb", "kl_ucb", "thompson", "known_mu_star", "greedy",
                                            "coin_greedy"};
  return ids;
}

/// Builds a strategy from its config id and parameters.
inline Strategy make_strategy(const StrategySpec& spec, std::size_t arms) {
  auto param = [&](const std::string& key) -> std::optional<double> {
    auto it = spec.params.find(key);
    if (it == spec.params.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [key, _] : spec.params) {
    const bool known = (spec.id == "kl_ucb" && key == "upper") || (spec.id == "known_mu_star" && key == "mu_star");
    if (!known) throw ConfigError("strategy '" + spec.id + "' does not take parameter '" + key + "'");
  }
  if (spec.id == "uniform") return Strategy::uniform(arms);
  if (spec.id == "ucb") return Strategy::ucb(arms);
  if (spec.id == "kl_ucb") return Strategy::kl_ucb(arms, param("upper").value_or(1.0));
  if (spec.id == "thompson") return Strategy::thompson_bernoulli(arms);
  if (spec.id == "greedy") return Strategy::greedy(arms);
  if (spec.id == "coin_greedy") return Strategy::coin_greedy(arms);
  if (spec.id == "known_mu_star") {
    auto mu = param("mu_star");
    if (!mu) throw ConfigError("strategy 'known_mu_star' requires parameter 'mu_star'");
    return Strategy::known_mu_star(arms, *mu);
  }
  throw ConfigError("unknown strategy id '" + spec.id + "'");
}

}  // namespace bandit_lb
