#pragma once
/// \file verification.hpp
/// Invariant batteries behind the `verify` command: divergence grids, the
/// enumerated chain-rule and fundamental-inequality instances, random
/// data-processing triples and the K_inf dual-vs-primal cross-check.
///
/// Every check yields one row `instance_id,check,value,threshold,pass`.
/// Rows whose check name ends in `_slack` or `min_margin` pass when
/// value >= threshold; residual and error rows pass when value <= threshold.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "divergence.hpp"
#include "exact_verifier.hpp"
#include "models.hpp"
#include "oracles.hpp"
#include "random.hpp"
#include "strategies.hpp"

namespace bandit_lb {

struct VerificationRow {
  std::string instance_id;
  std::string check;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct BatteryOptions {
  bool quick = false;
  std::uint64_t seed = 20240101;
};

namespace detail {

inline VerificationRow at_least(std::string id, std::string check, double value, double threshold) {
  return {std::move(id), std::move(check), value, threshold, value >= threshold};
}
inline VerificationRow at_most(std::string id, std::string check, double value, double threshold) {
  return {std::move(id), std::move(check), value, threshold, value <= threshold};
}

inline double kl_or_inf(double p, double q) { return bernoulli_kl(p, q).value(); }

}  // namespace detail

/// Grid inequalities of the divergence kernels. Each row reports the worst
/// margin (left minus right side) over its grid; tolerance 1e-12.
inline std::vector<VerificationRow> divergence_grid_checks() {
  constexpr double tol = 1e-12;
  constexpr int n = 201;
  std::vector<VerificationRow> rows;
  auto grid = [](int i) { return static_cast<double>(i) / (n - 1); };

  double pinsker = INFINITY, local_q = INFINITY, local_var = INFINITY, linear = INFINITY, mono = INFINITY;
  for (int i = 0; i < n; ++i) {
    const double p = grid(i);
    for (int j = 0; j < n; ++j) {
      const double q = grid(j);
      const double kl = detail::kl_or_inf(p, q);
      pinsker = std::min(pinsker, kl - 2.0 * (p - q) * (p - q));
      if (p < q && q < 1.0) {
        local_q = std::min(local_q, kl - (p - q) * (p - q) / (2.0 * q));
        double vmax;
        if (p <= 0.5 && q >= 0.5) vmax = 0.25;
        else if (q < 0.5) vmax = q * (1.0 - q);
        else vmax = p * (1.0 - p);
        local_var = std::min(local_var, kl - (p - q) * (p - q) / (2.0 * vmax));
      }
      if (q > 0.0 && q < 1.0)
        linear = std::min(linear, kl - (p * std::log(1.0 / q) + (1.0 - p) * std::log(1.0 / (1.0 - q)) - std::log(2.0)));
      if (j > 0) {
        const double prev = detail::kl_or_inf(p, grid(j - 1));
        // nonincreasing up to p, nondecreasing from p
        if (q <= p) {
          if (!(std::isinf(prev) && std::isinf(kl))) mono = std::min(mono, prev - kl);
        } else if (grid(j - 1) >= p) {
          if (!(std::isinf(prev) && std::isinf(kl))) mono = std::min(mono, kl - prev);
        }
      }
    }
  }
  rows.push_back(detail::at_least("grid201", "pinsker_classical_min_margin", pinsker, -tol));
  rows.push_back(detail::at_least("grid201", "pinsker_local_q_min_margin", local_q, -tol));
  rows.push_back(detail::at_least("grid201", "pinsker_local_variance_min_margin", local_var, -tol));
  rows.push_back(detail::at_least("grid201", "kl_linear_lower_min_margin", linear, -tol));
  rows.push_back(detail::at_least("grid201", "kl_monotonicity_min_margin", mono, -tol));

  double entropy = INFINITY;
  for (int i = 1; i <= 1000; ++i) {
    const double x = 0.5 * i / 1000.0;
    entropy = std::min(entropy, x * std::log(4.0 / x) - binary_entropy(x));
  }
  rows.push_back(detail::at_least("grid1000", "entropy_bound_min_margin", entropy, -tol));

  double study = INFINITY;
  for (int i = 1; i <= 1000; ++i) {
    const double x = i / 1001.0;
    study = std::min(study, (1.0 - 2.0 * x) * std::log((1.0 - x) / x) - std::log(1.0 / (2.4 * x)));
  }
  rows.push_back(detail::at_least("grid1000", "function_study_min_margin", study, -tol));

  double lower = INFINITY, upper = INFINITY;
  const int m = 1000;
  const double lo = 1.0, hi = 12.0 * std::log(10.0);  // ln u from 1 to ln 1e12
  for (int i = 0; i <= m; ++i) {
    const double u = std::exp(lo + (hi - lo) * i / m);
    const double w = lambert_w(u);
    const double lu = std::log(u);
    lower = std::min(lower, (w - (lu - std::log(lu))) / std::max(1.0, lu));
    upper = std::min(upper, (lu - w) / std::max(1.0, lu));
  }
  rows.push_back(detail::at_least("loggrid_e_1e12", "lambert_lower_min_margin", lower, -tol));
  rows.push_back(detail::at_least("loggrid_e_1e12", "lambert_upper_min_margin", upper, -tol));
  return rows;
}

/// One enumerated instance of the chain rule / fundamental inequality battery.
struct ExactInstance {
  std::string id;
  BanditProblem nu;
  BanditProblem nu_prime;
  StrategySpec strategy;
  std::uint64_t T;
  std::uint64_t R;
};

/// At least 100 instances: K in {2, 3}, T in 1..8, deterministic strategies
/// (greedy, ucb, kl_ucb) and R = 2 randomized ones (uniform and
/// known_mu_star for K = 2, coin_greedy for K = 2, 3). Bernoulli parameters
/// are drawn from {0.1, ..., 0.9}.
inline std::vector<ExactInstance> exact_battery(const BatteryOptions& opt = {}) {
  Rng rng(opt.seed);
  auto param = [&] { return 0.1 * static_cast<double>(1 + rng.bits() % 9); };
  const std::uint64_t t_max = opt.quick ? 6 : 8;
  std::vector<ExactInstance> out;
  for (std::size_t K : {std::size_t{2}, std::size_t{3}}) {
    std::vector<std::string> ids{"greedy", "ucb", "kl_ucb", "coin_greedy"};
    if (K == 2) {
      ids.push_back("uniform");
      ids.push_back("known_mu_star");
    }
    for (std::uint64_t T = 1; T <= t_max; ++T) {
      for (const auto& sid : ids) {
        for (int rep = 0; rep < 2; ++rep) {
          std::vector<double> a(K), b(K);
          for (std::size_t k = 0; k < K; ++k) a[k] = param();
          for (std::size_t k = 0; k < K; ++k) b[k] = param();
          StrategySpec spec{sid, {}};
          if (sid == "known_mu_star") spec.params["mu_star"] = *std::max_element(a.begin(), a.end());
          const bool randomized = sid == "uniform" || sid == "known_mu_star" || sid == "coin_greedy";
          const std::uint64_t R = randomized ? 2 : 1;
          std::string id = "K" + std::to_string(K) + "_T" + std::to_string(T) + "_" + sid + "_" + std::to_string(rep);
          out.push_back({std::move(id), bernoulli_problem(a), bernoulli_problem(b), std::move(spec), T, R});
        }
      }
    }
  }
  return out;
}

inline std::vector<VerificationRow> exact_instance_checks(const ExactInstance& inst) {
  std::vector<VerificationRow> rows;
  const Strategy proto = make_strategy(inst.strategy, inst.nu.size());
  const TrajectoryTable table = enumerate_trajectories(inst.nu, inst.nu_prime, proto, inst.T, inst.R);
  rows.push_back(detail::at_most(inst.id, "mass_error", std::max(std::abs(table.total_mass(false) - 1.0),
                                                                 std::abs(table.total_mass(true) - 1.0)),
                                 1e-12));
  rows.push_back(detail::at_most(inst.id, "chain_rule_residual", chain_rule_residual(table, inst.nu, inst.nu_prime),
                                 1e-10));
  double worst = INFINITY;
  for (std::size_t z = 0; z < table.z_ids.size(); ++z)
    worst = std::min(worst, fundamental_slack(table, inst.nu, inst.nu_prime, z));
  rows.push_back(detail::at_least(inst.id, "fundamental_slack", worst, -1e-10));
  return rows;
}

/// Random triples (p1, p2, z) on up to 64 outcomes.
inline std::vector<VerificationRow> data_processing_checks(const BatteryOptions& opt = {}) {
  Rng rng(splitmix64(opt.seed ^ 0xD47A));
  const int n_triples = opt.quick ? 1000 : 10000;
  double worst = INFINITY;
  for (int t = 0; t < n_triples; ++t) {
    const std::size_t n = 2 + rng.bits() % 63;
    std::vector<double> p1(n), p2(n), z(n);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p1[i] = -std::log(1.0 - rng.uniform());
      p2[i] = -std::log(1.0 - rng.uniform());
      s1 += p1[i];
      s2 += p2[i];
      // a third of the statistics are event indicators
      z[i] = (t % 3 == 0) ? (rng.uniform() < 0.5 ? 0.0 : 1.0) : rng.uniform();
    }
    for (std::size_t i = 0; i < n; ++i) {
      p1[i] /= s1;
      p2[i] /= s2;
    }
    worst = std::min(worst, data_processing_slack(p1, p2, z));
  }
  return {detail::at_least("random_triples_" + std::to_string(n_triples), "data_processing_slack", worst, -1e-12)};
}

/// A reproducible random finite law on [0, M] with 1..4 support points.
inline Finite random_finite(Rng& rng) {
  static constexpr double ceilings[] = {1.0, 2.0, 0.5};
  Finite f;
  f.ceiling = ceilings[rng.bits() % 3];
  const std::size_t n = 1 + rng.bits() % 4;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f.points.push_back(std::round(rng.uniform() * f.ceiling * 0.9 * 1000.0) / 1000.0);
    f.weights.push_back(0.1 + rng.uniform());
    s += f.weights.back();
  }
  for (auto& w : f.weights) w /= s;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) total += f.weights[i];
  f.weights.back() = 1.0 - total;
  return f;
}

/// K_inf cross-checks: Bernoulli reduction, dual vs primal on random finite
/// supports, and the linear continuity bound on the same supports.
inline std::vector<VerificationRow> k_inf_checks(const BatteryOptions& opt = {}) {
  std::vector<VerificationRow> rows;
  double bern = 0.0;
  int pairs = 0;
  for (int i = 1; i <= 11 && pairs < 50; ++i)
    for (int j = i + 1; j <= 11 && pairs < 50; ++j) {
      const double p = i / 12.0, x = j / 12.0;
      const double a = k_inf(Bernoulli{p}, x, ModelTag::bernoulli).value();
      bern = std::max(bern, std::abs(a - bernoulli_kl(p, x).value()));
      ++pairs;
    }
  rows.push_back(detail::at_most("bernoulli_pairs_" + std::to_string(pairs), "k_inf_reduction_error", bern, 1e-10));

  Rng rng(splitmix64(opt.seed ^ 0xF1417E));
  for (int s = 0; s < 20; ++s) {
    const Finite f = random_finite(rng);
    const double M = f.ceiling;
    const double mu = mean(Distribution{f});
    const double x = mu + (0.05 + 0.85 * rng.uniform()) * (M - mu);
    const std::string id = "finite_" + std::to_string(s);
    const double dual = k_inf(f, x, ModelTag::bounded_support).value();
    const double primal = oracle::k_inf_primal(f, x);
    rows.push_back(detail::at_most(id, "k_inf_dual_vs_primal_error", std::abs(dual - primal), 1e-4));
    const double eps = (0.05 + 0.9 * rng.uniform()) * (M - x) / 4.0;
    const double lhs = k_inf(f, x + eps, ModelTag::bounded_support).value();
    const double rhs = dual + k_inf_continuity_increment(f, x, eps, ModelTag::bounded_support);
    rows.push_back(detail::at_least(id, "k_inf_continuity_slack", rhs - lhs, -1e-9));
  }
  return rows;
}

/// The whole `verify` battery in report order.
inline std::vector<VerificationRow> run_verification_battery(const BatteryOptions& opt = {}) {
  std::vector<VerificationRow> rows = divergence_grid_checks();
  for (const auto& inst : exact_battery(opt)) {
    auto r = exact_instance_checks(inst);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  auto dp = data_processing_checks(opt);
  rows.insert(rows.end(), dp.begin(), dp.end());
  auto ki = k_inf_checks(opt);
  rows.insert(rows.end(), ki.begin(), ki.end());
  return rows;
}

}  // namespace bandit_lb
