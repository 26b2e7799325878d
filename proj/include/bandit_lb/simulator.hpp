#pragma once
/// \file simulator.hpp
/// Seeded Monte Carlo bandit environment.
///
/// A run plays T rounds of choose -> draw reward -> update and records the
/// pseudo-regret sum_a Delta_a N_a(t) at a grid of checkpoints. Pseudo-regret
/// is evaluated from integer pull counts, so r(T) = sum_a Delta_a N_a(T)
/// holds exactly.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "models.hpp"
#include "random.hpp"
#include "strategies.hpp"

namespace bandit_lb {

struct RunRecord {
  std::vector<std::uint64_t> final_counts;
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> regret;                                   // pseudo-regret at each checkpoint
  std::vector<std::vector<std::uint64_t>> checkpoint_counts;    // N_a(t) at each checkpoint
  std::uint64_t seed = 0;
  bool operator==(const RunRecord&) const = default;
};

struct AggregateCurve {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean_regret;
  std::vector<double> stderr_regret;
  std::size_t runs = 0;
  /// Per checkpoint, per arm: mean and standard error of N_a(t).
  std::vector<std::vector<double>> mean_counts;
  std::vector<std::vector<double>> stderr_counts;

  const std::vector<double>& final_mean_counts() const { return mean_counts.back(); }
  const std::vector<double>& final_stderr_counts() const { return stderr_counts.back(); }
  std::size_t index_of(std::uint64_t T) const {
    auto it = std::find(checkpoints.begin(), checkpoints.end(), T);
    if (it == checkpoints.end()) throw DomainError("checkpoint " + std::to_string(T) + " not recorded");
    return static_cast<std::size_t>(it - checkpoints.begin());
  }
};

/// Sample mean and standard error (sample std / sqrt(n)); 0 error for n = 1.
struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  const double n = static_cast<double>(xs.size());
  if (xs.empty()) return out;
  double s = 0.0;
  for (double x : xs) s += x;
  out.mean = s / n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

namespace detail {
inline void check_checkpoints(const std::vector<std::uint64_t>& cps, std::uint64_t T) {
  if (cps.empty()) throw DomainError("checkpoints must be non-empty");
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] < 1 || cps[i] > T) throw DomainError("checkpoints must lie in [1, T]");
    if (i > 0 && cps[i] <= cps[i - 1]) throw DomainError("checkpoints must be strictly increasing");
  }
}

inline double pseudo_regret(const BanditProblem& nu, const std::vector<std::uint64_t>& counts) {
  double r = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) r += nu.gap(a) * static_cast<double>(counts[a]);
  return r;
}
}  // namespace detail

/// Plays one run. Equal (problem, strategy, T, seed, checkpoints) give equal records.
inline RunRecord run_once(const BanditProblem& nu, const StrategySpec& spec, std::uint64_t T, std::uint64_t seed,
                          std::vector<std::uint64_t> checkpoints = {}) {
  if (T < 1) throw DomainError("run_once: T must be >= 1");
  if (checkpoints.empty()) checkpoints = {T};
  detail::check_checkpoints(checkpoints, T);

  Strategy strategy = make_strategy(spec, nu.size());
  const RunSeeds seeds = seeds_from_run_seed(seed);
  Rng reward_stream(seeds.reward_seed);
  Rng decision_stream(seeds.decision_seed);

  RunRecord rec;
  rec.seed = seed;
  rec.checkpoints = checkpoints;
  std::size_t next_cp = 0;
  for (std::uint64_t t = 1; t <= T; ++t) {
    const std::size_t arm = strategy.choose(decision_stream);
    const double reward = draw(nu.arm(arm), reward_stream);
    if (!std::isfinite(reward)) throw DomainError("sampler produced a non-finite reward on arm " + std::to_string(arm + 1));
    strategy.update(arm, reward);
    if (t == checkpoints[next_cp]) {
      rec.checkpoint_counts.push_back(strategy.stats().counts);
      rec.regret.push_back(detail::pseudo_regret(nu, strategy.stats().counts));
      ++next_cp;
    }
  }
  rec.final_counts = strategy.stats().counts;
  return rec;
}

/// Runs `runs` independent simulations (run i seeded by derive_run_seeds(base_seed, i))
/// across `threads` workers (0 = hardware concurrency). Results are in run order.
inline std::vector<RunRecord> monte_carlo_runs(const BanditProblem& nu, const StrategySpec& spec, std::uint64_t T,
                                               std::size_t runs, std::uint64_t base_seed,
                                               const std::vector<std::uint64_t>& checkpoints, unsigned threads = 0) {
  if (runs < 1) throw DomainError("monte_carlo: runs must be >= 1");
  make_strategy(spec, nu.size());  // surface configuration errors before spawning workers
  std::vector<RunRecord> records(runs);
  std::vector<std::exception_ptr> errors(runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs) return;
      try {
        records[i] = run_once(nu, spec, T, derive_run_seeds(base_seed, i).run_seed, checkpoints);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, runs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < runs; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw SimulationError(i, e.what());
    }
  }
  return records;
}

/// Fixed-order reduction of run records into means and standard errors.
inline AggregateCurve aggregate(const std::vector<RunRecord>& records) {
  if (records.empty()) throw DomainError("aggregate: no runs");
  AggregateCurve agg;
  agg.checkpoints = records.front().checkpoints;
  agg.runs = records.size();
  const std::size_t K = records.front().final_counts.size();
  std::vector<double> buf(records.size());
  for (std::size_t c = 0; c < agg.checkpoints.size(); ++c) {
    for (std::size_t r = 0; r < records.size(); ++r) buf[r] = records[r].regret[c];
    const auto ms = mean_stderr(buf);
    agg.mean_regret.push_back(ms.mean);
    agg.stderr_regret.push_back(ms.stderr_);
    std::vector<double> mc(K), sc(K);
    for (std::size_t a = 0; a < K; ++a) {
      for (std::size_t r = 0; r < records.size(); ++r) buf[r] = static_cast<double>(records[r].checkpoint_counts[c][a]);
      const auto m = mean_stderr(buf);
      mc[a] = m.mean;
      sc[a] = m.stderr_;
    }
    agg.mean_counts.push_back(std::move(mc));
    agg.stderr_counts.push_back(std::move(sc));
  }
  return agg;
}

inline AggregateCurve monte_carlo(const BanditProblem& nu, const StrategySpec& spec, std::uint64_t T, std::size_t runs,
                                  std::uint64_t base_seed, std::vector<std::uint64_t> checkpoints = {},
                                  unsigned threads = 0) {
  if (checkpoints.empty()) checkpoints = {T};
  return aggregate(monte_carlo_runs(nu, spec, T, runs, base_seed, checkpoints, threads));
}

// ---------------------------------------------------------------------------
// Sample-level checks of the strategy classes used by the small-T bounds.

enum class DefinitionCheckKind { smarter_than_uniform, pairwise_symmetry, monotonicity };

struct DefinitionCheck {
  DefinitionCheckKind kind;
  std::string detail;
  double estimate;   // the sample quantity
  double reference;  // what the definition requires it to be at least / equal to
  double z;
  bool violated;     // beyond 4 standard errors in the forbidden direction
};

namespace detail {
inline double z_score(double diff, double se) {
  if (se > 0.0) return diff / se;
  if (diff == 0.0) return 0.0;
  return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}
}  // namespace detail

/// Estimates the defining (in)equalities of "smarter than uniform",
/// "pairwise symmetric for optimal arms" and "monotonic" for one strategy.
/// Throws ConfigError when the problem cannot host a requested check.
inline std::vector<DefinitionCheck> empirical_definition_checks(
    const BanditProblem& nu, const StrategySpec& spec, std::uint64_t T, std::size_t runs, std::uint64_t base_seed,
    const std::vector<DefinitionCheckKind>& kinds = {DefinitionCheckKind::smarter_than_uniform},
    unsigned threads = 0) {
  constexpr double kSigma = 4.0;
  const auto records = monte_carlo_runs(nu, spec, T, runs, base_seed, {T}, threads);
  const double K = static_cast<double>(nu.size());
  std::vector<DefinitionCheck> out;
  std::vector<double> buf(records.size());

  auto optimal_total = [&](const std::vector<RunRecord>& recs) {
    std::vector<double> v(recs.size());
    for (std::size_t r = 0; r < recs.size(); ++r)
      for (std::size_t a : nu.optimal_arms()) v[r] += static_cast<double>(recs[r].final_counts[a]);
    return mean_stderr(v);
  };

  for (auto kind : kinds) {
    switch (kind) {
      case DefinitionCheckKind::smarter_than_uniform: {
        for (std::size_t s : nu.optimal_arms()) {
          for (std::size_t r = 0; r < records.size(); ++r) buf[r] = static_cast<double>(records[r].final_counts[s]);
          const auto ms = mean_stderr(buf);
          const double ref = static_cast<double>(T) / K;
          const double z = detail::z_score(ms.mean - ref, ms.stderr_);
          out.push_back({kind, "E[N_" + std::to_string(s + 1) + "(T)] >= T/K", ms.mean, ref, z, z < -kSigma});
        }
        break;
      }
      case DefinitionCheckKind::pairwise_symmetry: {
        const auto& opt = nu.optimal_arms();
        bool found = false;
        for (std::size_t i = 0; i < opt.size() && !found; ++i) {
          for (std::size_t j = i + 1; j < opt.size() && !found; ++j) {
            if (!(nu.arm(opt[i]) == nu.arm(opt[j]))) continue;
            found = true;
            for (std::size_t r = 0; r < records.size(); ++r)
              buf[r] = static_cast<double>(records[r].final_counts[opt[i]]) -
                       static_cast<double>(records[r].final_counts[opt[j]]);
            const auto ms = mean_stderr(buf);
            const double z = detail::z_score(ms.mean, ms.stderr_);
            out.push_back({kind,
                           "E[N_" + std::to_string(opt[i] + 1) + "(T)] = E[N_" + std::to_string(opt[j] + 1) + "(T)]",
                           ms.mean, 0.0, z, std::abs(z) > kSigma});
          }
        }
        if (!found) throw ConfigError("pairwise symmetry check needs two optimal arms with equal laws");
        break;
      }
      case DefinitionCheckKind::monotonicity: {
        if (nu.optimal_arms().size() == nu.size())
          throw ConfigError("monotonicity check needs at least one suboptimal arm");
        std::vector<Distribution> lowered = nu.arms();
        const Distribution& worst = nu.arm(nu.worst_arms().front());
        for (std::size_t a = 0; a < nu.size(); ++a)
          if (!nu.is_optimal(a)) lowered[a] = worst;
        const BanditProblem easier(lowered, nu.model());
        const auto rec2 = monte_carlo_runs(easier, spec, T, runs, splitmix64(base_seed), {T}, threads);
        const auto base = optimal_total(records);
        const auto alt = optimal_total(rec2);
        const double se = std::sqrt(base.stderr_ * base.stderr_ + alt.stderr_ * alt.stderr_);
        const double z = detail::z_score(alt.mean - base.mean, se);
        out.push_back({kind, "E_nu'[sum N_a*(T)] >= E_nu[sum N_a*(T)]", alt.mean, base.mean, z, z < -kSigma});
        break;
      }
    }
  }
  return out;
}

}  // namespace bandit_lb
