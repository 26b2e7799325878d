#pragma once
/// \file exact_verifier.hpp
/// Exhaustive trajectory enumeration for small Bernoulli bandits.
///
/// A trajectory is the sequence of rewards Y_1..Y_T together with the
/// randomization symbols consumed by the strategy. The strategy's uniform
/// draws are replaced by the midpoints (s + 1/2)/R of R equiprobable cells and
/// the enumeration branches over s only in rounds where a draw is requested.
/// For strategies that are exact on the alphabet, the table is the exact law
/// of the trajectory under nu and under nu'.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "divergence.hpp"
#include "errors.hpp"
#include "models.hpp"
#include "strategies.hpp"

namespace bandit_lb {

inline constexpr double kMaxEnumerationRows = 1e7;
inline constexpr std::uint64_t kMaxEnumerationHorizon = 12;
inline constexpr std::uint64_t kMaxAlphabet = 4;

struct TrajectoryRow {
  std::vector<std::uint8_t> rewards;  // Y_t in {0, 1}
  std::vector<std::int8_t> symbols;   // randomization symbol per round, -1 when none was drawn
  double p = 0.0;                     // probability under nu
  double p_prime = 0.0;               // probability under nu'
  double log_ratio = 0.0;             // ln(p / p'); +inf when p' = 0, -inf when p = 0
  std::vector<std::uint32_t> counts;  // N_a(T)
  std::vector<double> z;              // [0,1]-valued statistics, see TrajectoryTable::z_ids
};

struct TrajectoryTable {
  std::size_t arms = 0;
  std::uint64_t horizon = 0;
  std::uint64_t alphabet = 0;
  std::vector<std::string> z_ids;
  std::vector<TrajectoryRow> rows;

  /// E[N_a(T)] under nu (prime = false) or nu' (prime = true).
  std::vector<double> expected_counts(bool prime = false) const {
    std::vector<double> out(arms, 0.0);
    for (const auto& r : rows) {
      const double w = prime ? r.p_prime : r.p;
      for (std::size_t a = 0; a < arms; ++a) out[a] += w * r.counts[a];
    }
    return out;
  }

  /// Normalized by the total mass so a constant statistic comes out exact.
  double expected_z(std::size_t j, bool prime = false) const {
    double s = 0.0, m = 0.0;
    for (const auto& r : rows) {
      const double w = prime ? r.p_prime : r.p;
      s += w * r.z[j];
      m += w;
    }
    return std::clamp(s / m, 0.0, 1.0);
  }

  double total_mass(bool prime = false) const {
    double s = 0.0;
    for (const auto& r : rows) s += prime ? r.p_prime : r.p;
    return s;
  }
};

namespace detail {

/// Feeds one alphabet symbol as a uniform draw; refuses a second draw in the same round.
class SymbolSource {
 public:
  SymbolSource(std::uint64_t alphabet, std::uint64_t symbol) : r_(alphabet), s_(symbol) {}
  double uniform() {
    if (used_) throw EnumerationError("strategy requested more than one randomization draw in a round");
    used_ = true;
    return (static_cast<double>(s_) + 0.5) / static_cast<double>(r_);
  }
  bool used() const { return used_; }

 private:
  std::uint64_t r_, s_;
  bool used_ = false;
};

inline std::vector<std::string> z_ids_for(std::size_t K) {
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < K; ++k) ids.push_back("N" + std::to_string(k + 1) + "/T");
  ids.push_back("optimal_share");
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < K; ++j)
      if (k != j) ids.push_back("N" + std::to_string(k + 1) + "+/(N" + std::to_string(k + 1) + "+ + N" +
                                std::to_string(j + 1) + "+)");
  return ids;
}

inline std::vector<double> z_values(const std::vector<std::uint32_t>& counts, std::uint64_t T,
                                    const std::vector<std::size_t>& optimal) {
  const std::size_t K = counts.size();
  const double t = static_cast<double>(T);
  std::vector<double> z;
  for (std::size_t k = 0; k < K; ++k) z.push_back(counts[k] / t);
  double opt = 0.0;
  for (std::size_t a : optimal) opt += counts[a];
  z.push_back(opt / t);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < K; ++j)
      if (k != j) {
        const double nk = std::max<double>(counts[k], 1.0);
        const double nj = std::max<double>(counts[j], 1.0);
        z.push_back(nk / (nk + nj));
      }
  return z;
}

inline double bern_mass(double p, std::uint8_t y) { return y ? p : 1.0 - p; }

struct Enumerator {
  const std::vector<double>& p;
  const std::vector<double>& q;
  std::uint64_t R, T;
  std::size_t K;
  const std::vector<std::size_t>& optimal;
  TrajectoryTable& table;
  std::vector<std::uint8_t> rewards;
  std::vector<std::int8_t> symbols;

  void leaf(const Strategy& s, double pp, double pq, double lr) {
    TrajectoryRow row;
    row.rewards = rewards;
    row.symbols = symbols;
    row.p = pp;
    row.p_prime = pq;
    row.log_ratio = lr;
    row.counts.resize(K);
    for (std::size_t a = 0; a < K; ++a) row.counts[a] = static_cast<std::uint32_t>(s.stats().counts[a]);
    row.z = z_values(row.counts, T, optimal);
    table.rows.push_back(std::move(row));
  }

  void node(const Strategy& s, double pp, double pq, double lr) {
    if (s.stats().rounds == T) return leaf(s, pp, pq, lr);
    Strategy probe = s;
    SymbolSource src0(R, 0);
    const std::size_t arm0 = probe.choose(src0);
    if (!src0.used()) {
      symbols.push_back(-1);
      rewards_step(probe, arm0, pp, pq, lr);
      symbols.pop_back();
      return;
    }
    const double w = 1.0 / static_cast<double>(R);
    for (std::uint64_t sym = 0; sym < R; ++sym) {
      Strategy branch = s;
      SymbolSource src(R, sym);
      const std::size_t arm = branch.choose(src);
      symbols.push_back(static_cast<std::int8_t>(sym));
      rewards_step(branch, arm, pp * w, pq * w, lr);
      symbols.pop_back();
    }
  }

  void rewards_step(const Strategy& s, std::size_t arm, double pp, double pq, double lr) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (std::uint8_t y = 0; y < 2; ++y) {
      const double mp = bern_mass(p[arm], y);
      const double mq = bern_mass(q[arm], y);
      if (mp == 0.0 && mq == 0.0) continue;
      double nlr = lr;
      if (mp == 0.0) nlr = -inf;
      else if (mq == 0.0) nlr = (lr == -inf) ? -inf : inf;
      else if (std::isfinite(lr)) nlr = lr + std::log(mp) - std::log(mq);
      Strategy next = s;
      next.update(arm, static_cast<double>(y));
      rewards.push_back(y);
      node(next, pp * mp, pq * mq, nlr);
      rewards.pop_back();
    }
  }
};

}  // namespace detail

/// Enumerates every trajectory of `proto` (a fresh strategy) on nu and nu'.
/// Throws EnumerationError when the strategy is not exact on the alphabet or
/// the table would exceed (2R)^T > 1e7 rows, T > 12 or R > 4.
inline TrajectoryTable enumerate_trajectories(const BanditProblem& nu, const BanditProblem& nu_prime,
                                              const Strategy& proto, std::uint64_t T, std::uint64_t R) {
  if (nu.model() != ModelTag::bernoulli || nu_prime.model() != ModelTag::bernoulli)
    throw EnumerationError("exact enumeration needs Bernoulli problems");
  if (nu.size() != nu_prime.size() || proto.arms() != nu.size())
    throw EnumerationError("problems and strategy disagree on the number of arms");
  if (proto.stats().rounds != 0) throw EnumerationError("strategy must be fresh");
  if (T < 1 || T > kMaxEnumerationHorizon) throw EnumerationError("horizon must lie in [1, 12]");
  if (R < 1 || R > kMaxAlphabet) throw EnumerationError("alphabet size must lie in [1, 4]");
  if (!proto.exact_on_alphabet(R))
    throw EnumerationError("strategy '" + proto.id() + "' is not exact on an alphabet of size " + std::to_string(R));
  if (std::pow(2.0 * static_cast<double>(R), static_cast<double>(T)) > kMaxEnumerationRows)
    throw EnumerationError("enumeration would exceed 1e7 trajectories");

  const std::size_t K = nu.size();
  std::vector<double> p(K), q(K);
  for (std::size_t a = 0; a < K; ++a) {
    p[a] = std::get<Bernoulli>(nu.arm(a)).p;
    q[a] = std::get<Bernoulli>(nu_prime.arm(a)).p;
  }

  TrajectoryTable table;
  table.arms = K;
  table.horizon = T;
  table.alphabet = R;
  table.z_ids = detail::z_ids_for(K);
  const auto optimal = nu.optimal_arms();

  detail::Enumerator e{p, q, R, T, K, optimal, table, {}, {}};
  e.rewards.reserve(T);
  e.symbols.reserve(T);
  e.node(proto, 1.0, 1.0, 0.0);
  return table;
}

/// KL(P_nu || P_nu') of the trajectory laws recorded in the table.
inline double trajectory_kl(const TrajectoryTable& t) {
  double s = 0.0;
  for (const auto& r : t.rows) {
    if (r.p == 0.0) continue;
    if (r.p_prime == 0.0) return std::numeric_limits<double>::infinity();
    s += r.p * r.log_ratio;
  }
  return std::max(0.0, s);
}

/// sum_a E_nu[N_a(T)] KL(nu_a, nu'_a), with 0 * inf = 0.
inline double expected_count_divergence(const TrajectoryTable& t, const BanditProblem& nu,
                                        const BanditProblem& nu_prime) {
  const auto n = t.expected_counts(false);
  double s = 0.0;
  for (std::size_t a = 0; a < t.arms; ++a) {
    const ExtReal k = kl_div(nu.arm(a), nu_prime.arm(a));
    if (n[a] == 0.0) continue;
    if (k.is_infinite()) return std::numeric_limits<double>::infinity();
    s += n[a] * k.value();
  }
  return s;
}

/// |KL(P_nu || P_nu') - sum_a E_nu[N_a] KL(nu_a, nu'_a)|. Both sides infinite
/// gives 0; exactly one infinite side is a contract violation.
inline double chain_rule_residual(const TrajectoryTable& t, const BanditProblem& nu, const BanditProblem& nu_prime) {
  const double lhs = trajectory_kl(t);
  const double rhs = expected_count_divergence(t, nu, nu_prime);
  if (std::isinf(lhs) && std::isinf(rhs)) return 0.0;
  if (std::isinf(lhs) || std::isinf(rhs))
    throw ContractViolation("chain rule: exactly one side is infinite");
  return std::abs(lhs - rhs);
}

/// sum_a E_nu[N_a] KL(nu_a, nu'_a) - kl(E_nu[Z], E_nu'[Z]) for statistic z_index.
/// Non-negative whenever the inequality holds; +inf when the left side is infinite.
inline double fundamental_slack(const TrajectoryTable& t, const BanditProblem& nu, const BanditProblem& nu_prime,
                                std::size_t z_index) {
  if (z_index >= t.z_ids.size()) throw DomainError("fundamental_slack: no such statistic");
  for (const auto& r : t.rows)
    if (!(r.z[z_index] >= 0.0 && r.z[z_index] <= 1.0)) throw DomainError("statistic leaves [0, 1]");
  const double lhs = expected_count_divergence(t, nu, nu_prime);
  if (std::isinf(lhs)) return lhs;
  const ExtReal rhs = bernoulli_kl(t.expected_z(z_index, false), t.expected_z(z_index, true));
  if (rhs.is_infinite()) return -std::numeric_limits<double>::infinity();
  return lhs - rhs.value();
}

/// KL(P1 || P2) - kl(E_P1[Z], E_P2[Z]) on a finite outcome space.
inline double data_processing_slack(const std::vector<double>& p1, const std::vector<double>& p2,
                                    const std::vector<double>& z) {
  if (p1.size() != p2.size() || p1.size() != z.size() || p1.empty())
    throw DomainError("data_processing_slack: size mismatch");
  double s1 = 0.0, s2 = 0.0, e1 = 0.0, e2 = 0.0, kl = 0.0;
  bool infinite = false;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (p1[i] < 0.0 || p2[i] < 0.0) throw DomainError("data_processing_slack: negative mass");
    if (z[i] < 0.0 || z[i] > 1.0) throw DomainError("data_processing_slack: statistic leaves [0, 1]");
    s1 += p1[i];
    s2 += p2[i];
    e1 += p1[i] * z[i];
    e2 += p2[i] * z[i];
    if (p1[i] > 0.0) {
      if (p2[i] == 0.0) infinite = true;
      else kl += p1[i] * std::log(p1[i] / p2[i]);
    }
  }
  if (std::abs(s1 - 1.0) > 1e-9 || std::abs(s2 - 1.0) > 1e-9)
    throw DomainError("data_processing_slack: masses must sum to 1");
  if (infinite) return std::numeric_limits<double>::infinity();
  const ExtReal rhs = bernoulli_kl(std::clamp(e1 / s1, 0.0, 1.0), std::clamp(e2 / s2, 0.0, 1.0));
  if (rhs.is_infinite()) return -std::numeric_limits<double>::infinity();
  return std::max(0.0, kl) - rhs.value();
}

}  // namespace bandit_lb
