#pragma once
/// \file lower_bounds.hpp
/// Closed-form regret and pull-count lower bounds, as scalars and as curves
/// over a grid of horizons.
///
/// Curve values are never negative: a bound that evaluates below zero (or to
/// -inf) is emitted as 0 with its `is_void` flag set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "divergence.hpp"
#include "errors.hpp"
#include "models.hpp"

namespace bandit_lb {

struct BoundPoint {
  std::uint64_t T = 1;
  double value = 0.0;
  bool is_void = false;
  std::string attained_by;  // envelope only
  bool operator==(const BoundPoint&) const = default;
};

struct BoundCurve {
  std::string bound_id;
  std::map<std::string, double> params;
  std::vector<BoundPoint> points;
};

namespace bound_id {
inline constexpr const char* asymptotic = "asymptotic";
inline constexpr const char* distribution_free = "distribution_free";
inline constexpr const char* bpr_known_mu_star = "bpr_known_mu_star";
inline constexpr const char* bpr_known_gap = "bpr_known_gap";
inline constexpr const char* small_t_absolute = "small_t_absolute";
inline constexpr const char* small_t_relative = "small_t_relative";
inline constexpr const char* collective = "collective";
inline constexpr const char* large_t = "large_t";
inline constexpr const char* envelope = "envelope";
}  // namespace bound_id

inline const std::vector<std::string>& all_bound_ids() {
  static const std::vector<std::string> ids{bound_id::asymptotic,       bound_id::distribution_free,
                                            bound_id::bpr_known_mu_star, bound_id::bpr_known_gap,
                                            bound_id::small_t_absolute,  bound_id::small_t_relative,
                                            bound_id::collective,        bound_id::large_t,
                                            bound_id::envelope};
  return ids;
}

namespace detail {
inline BoundPoint clamped(std::uint64_t T, double raw) {
  if (std::isnan(raw) || raw <= 0.0 || std::isinf(raw)) return {T, 0.0, !(raw == 0.0), ""};
  return {T, raw, false, ""};
}
inline void check_grid(const std::vector<std::uint64_t>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw DomainError("horizon grid: T must be >= 1");
    if (i > 0 && grid[i] <= grid[i - 1]) throw DomainError("horizon grid: T must be strictly increasing");
  }
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Asymptotic bound

/// ln T / K_inf(nu_a, mu*): the asymptotic pull-count bound for arm a
/// (0 when K_inf is +inf or the arm is optimal).
inline double asymptotic_count(const BanditProblem& nu, std::size_t a, double T) {
  if (nu.is_optimal(a)) return 0.0;
  const ExtReal k = k_inf(nu.arm(a), nu.mu_star(), nu.model());
  if (k.is_infinite() || k.value() == 0.0) return 0.0;
  return std::log(T) / k.value();
}

/// Regret curve sum_a Delta_a ln T / K_inf(nu_a, mu*).
inline BoundCurve asymptotic_curve(const BanditProblem& nu, const std::vector<std::uint64_t>& grid) {
  detail::check_grid(grid);
  const auto kinf = k_inf_to_optimum(nu);
  BoundCurve c{bound_id::asymptotic, {{"K", static_cast<double>(nu.size())}}, {}};
  for (std::uint64_t T : grid) {
    double v = 0.0;
    for (std::size_t a = 0; a < nu.size(); ++a) {
      if (nu.is_optimal(a) || kinf[a].is_infinite() || kinf[a].value() == 0.0) continue;
      v += nu.gap(a) * std::log(static_cast<double>(T)) / kinf[a].value();
    }
    c.points.push_back(detail::clamped(T, v));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Distribution-free bound

/// T eps (1 - 1/K - (1/2) sqrt((T/K) ln(1/(1 - 4 eps^2)))), eps in (0, 1/2).
inline double distribution_free_bound(std::uint64_t K, double T, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("distribution_free_bound: eps must be in (0, 1/2)");
  if (K < 2) throw DomainError("distribution_free_bound: K must be >= 2");
  const double k = static_cast<double>(K);
  return T * eps * (1.0 - 1.0 / k - 0.5 * std::sqrt(T / k * -std::log1p(-4.0 * eps * eps)));
}

/// (1/20) min{sqrt(K T), T}.
inline double distribution_free_opt(std::uint64_t K, double T) {
  if (K < 2) throw DomainError("distribution_free_opt: K must be >= 2");
  return std::min(std::sqrt(static_cast<double>(K) * T), T) / 20.0;
}

inline BoundCurve distribution_free_curve(std::uint64_t K, const std::vector<std::uint64_t>& grid) {
  detail::check_grid(grid);
  BoundCurve c{bound_id::distribution_free, {{"K", static_cast<double>(K)}}, {}};
  for (std::uint64_t T : grid) c.points.push_back(detail::clamped(T, distribution_free_opt(K, static_cast<double>(T))));
  return c;
}

// ---------------------------------------------------------------------------
// Two-armed Gaussian bounds with side information

struct KnownMuStarBound {
  double count_v1;
  double regret_v1;
  /// Holds for strategies with E[N_2(T)] >= 1.
  double count_v2;
  double regret_v2;
};

inline KnownMuStarBound bpr_known_mu_star(double delta, double T) {
  if (!(delta > 0.0)) throw DomainError("bpr_known_mu_star: delta must be > 0");
  if (!(T >= 1.0)) throw DomainError("bpr_known_mu_star: T must be >= 1");
  const double c1 = 1.0 / (delta * delta + 1.0 / T);
  const double c2 = std::min(2.0 * std::log(2.0) / (delta * delta + 2.0 * std::log(4.0 * T) / T), T / 2.0);
  return {c1, delta * c1, c2, delta * c2};
}

/// min{ W(T Delta^2 / 1.2) / (2 Delta), T Delta / 2 }.
inline double bpr_known_gap(double delta, double T) {
  if (!(delta > 0.0)) throw DomainError("bpr_known_gap: delta must be > 0");
  if (!(T >= 1.0)) throw DomainError("bpr_known_gap: T must be >= 1");
  return std::min(lambert_w(T * delta * delta / 1.2) / (2.0 * delta), T * delta / 2.0);
}

/// Gap of a two-armed unit-variance Gaussian problem; throws IncompatibleBound otherwise.
inline double two_armed_gaussian_gap(const BanditProblem& nu, const std::string& id) {
  if (nu.size() != 2) throw IncompatibleBound(id, "requires exactly two arms");
  if (nu.model() != ModelTag::gaussian) throw IncompatibleBound(id, "requires the gaussian model");
  for (const auto& d : nu.arms())
    if (std::get<Gaussian>(d).variance != 1.0) throw IncompatibleBound(id, "requires unit variance");
  const double delta = std::abs(nu.means()[0] - nu.means()[1]);
  if (!(delta > 0.0)) throw IncompatibleBound(id, "requires a positive gap");
  return delta;
}

/// Regret form Delta * count_v1 over a grid, for a two-armed unit-variance Gaussian problem.
inline BoundCurve bpr_known_mu_star_curve(const BanditProblem& nu, const std::vector<std::uint64_t>& grid) {
  detail::check_grid(grid);
  const double delta = two_armed_gaussian_gap(nu, bound_id::bpr_known_mu_star);
  BoundCurve c{bound_id::bpr_known_mu_star, {{"delta", delta}}, {}};
  for (std::uint64_t T : grid) c.points.push_back(detail::clamped(T, bpr_known_mu_star(delta, static_cast<double>(T)).regret_v1));
  return c;
}

inline BoundCurve bpr_known_gap_curve(const BanditProblem& nu, const std::vector<std::uint64_t>& grid) {
  detail::check_grid(grid);
  const double delta = two_armed_gaussian_gap(nu, bound_id::bpr_known_gap);
  BoundCurve c{bound_id::bpr_known_gap, {{"delta", delta}}, {}};
  for (std::uint64_t T : grid) c.points.push_back(detail::clamped(T, bpr_known_gap(delta, static_cast<double>(T))));
  return c;
}

// ---------------------------------------------------------------------------
// Small-T bounds

struct SmallTAbsolute {
  double value;    // clamped lower bound on E[N_a(T)]
  double raw;      // (T/K)(1 - sqrt(2 T K_inf)), possibly negative or -inf
  bool is_void;
  double threshold;  // 1/(8 K_inf): for T <= threshold, E[N_a(T)] >= T/(2K)
  double simplified;  // T/(2K)
};

/// Lower bound on E[N_a(T)] for strategies smarter than the uniform one.
inline SmallTAbsolute small_t_absolute(const BanditProblem& nu, std::size_t a, double T, std::size_t K) {
  if (a >= nu.size()) throw DomainError("small_t_absolute: arm index out of range");
  if (K < 1) throw DomainError("small_t_absolute: K must be >= 1");
  const double kk = static_cast<double>(K);
  const ExtReal kinf = k_inf(nu.arm(a), nu.mu_star(), nu.model());
  const double inf = std::numeric_limits<double>::infinity();
  double raw;
  double threshold;
  if (kinf.is_infinite()) {
    raw = -inf;
    threshold = 0.0;
  } else {
    raw = T / kk * (1.0 - std::sqrt(2.0 * T * kinf.value()));
    threshold = kinf.value() == 0.0 ? inf : 1.0 / (8.0 * kinf.value());
  }
  const bool is_void = !(raw > 0.0) && !(T == 0.0);
  return {raw > 0.0 ? raw : 0.0, raw, is_void, threshold, T / (2.0 * kk)};
}

/// Regret curve sum_a Delta_a * small_t_absolute(a).
inline BoundCurve small_t_absolute_curve(const BanditProblem& nu, const std::vector<std::uint64_t>& grid) {
  detail::check_grid(grid);
  BoundCurve c{bound_id::small_t_absolute, {{"K", static_cast<double>(nu.size())}}, {}};
  for (std::uint64_t T : grid) {
    double v = 0.0;
    bool all_void = true;
    for (std::size_t a = 0; a < nu.size(); ++a) {
      if (nu.is_optimal(a)) continue;
      const auto b = small_t_absolute(nu, a, static_cast<double>(T), nu.size());
      v += nu.gap(a) * b.value;
      all_void = all_void && b.is_void;
    }
    BoundPoint p = detail::clamped(T, v);
    // void once every suboptimal arm's bound has gone negative
    p.is_void = p.is_void || (all_void && nu.optimal_arms().size() < nu.size());
    c.points.push_back(p);
  }
  return c;
}

struct SmallTRelative {
  /// Lower bound on E[max{N_a,1} / max{N_a*,1}] in the second branch.
  double value;
  double raw;
  bool is_void;
  /// The first branch of the disjunction: E[N_a(T)] >= T/K.
  double first_branch_count;
};

/// Either E[N_a(T)] >= T/K, or E[N_a^+ / N_a*^+] >= 1 - 2 sqrt(2 T KL(nu_a, nu_a*) / K).
inline SmallTRelative small_t_relative(const BanditProblem& nu, std::size_t a, std::size_t a_star, double T,
                                       std::size_t K) {
  if (a >= nu.size() || a_star >= nu.size()) throw DomainError("small_t_relative: arm index out of range");
  if (!nu.is_optimal(a_star)) throw DomainError("small_t_relative: a_star must be optimal");
  const ExtReal kl = kl_div(nu.arm(a), nu.arm(a_star));
  const double raw = kl.is_infinite() ? -std::numeric_limits<double>::infinity()
                                      : 1.0 - 2.0 * std::sqrt(2.0 * T * kl.value() / static_cast<double>(K));
  return {raw > 0.0 ? raw : 0.0, raw, !(raw > 0.0), T / static_cast<double>(K)};
}

/// For each T, the smallest relative bound over suboptimal arms against the
/// first optimal arm.
inline BoundCurve small_t_relative_curve(const BanditProblem& nu, const std::vector<std::uint64_t>& grid) {
  detail::check_grid(grid);
  const std::size_t star = nu.optimal_arms().front();
  BoundCurve c{bound_id::small_t_relative, {{"K", static_cast<double>(nu.size())}, {"a_star", double(star + 1)}}, {}};
  for (std::uint64_t T : grid) {
    double v = 1.0;
    for (std::size_t a = 0; a < nu.size(); ++a)
      if (!nu.is_optimal(a)) v = std::min(v, small_t_relative(nu, a, star, static_cast<double>(T), nu.size()).raw);
    c.points.push_back(detail::clamped(T, v));
  }
  return c;
}

struct CollectiveBound {
  double count;   // clamped lower bound on the total suboptimal pulls
  double regret;  // (min suboptimal gap) * count
  double raw_count;
  bool is_void;
};

/// T (1 - A*/K - A* sqrt(2 T K_max)/K - 2 A* T K_max / K), for pairwise
/// symmetric and monotonic strategies.
inline CollectiveBound collective_bound(const BanditProblem& nu, double T) {
  const double K = static_cast<double>(nu.size());
  const double A = static_cast<double>(nu.optimal_arms().size());
  const ExtReal kmax = k_max(nu);
  double raw;
  if (kmax.is_infinite()) {
    raw = -std::numeric_limits<double>::infinity();
  } else {
    const double km = kmax.value();
    raw = T * (1.0 - A / K - A * std::sqrt(2.0 * T * km) / K - 2.0 * A * T * km / K);
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < nu.size(); ++a)
    if (!nu.is_optimal(a)) min_gap = std::min(min_gap, nu.gap(a));
  const double count = raw > 0.0 ? raw : 0.0;
  const double regret = std::isfinite(min_gap) ? min_gap * count : 0.0;
  return {count, regret, raw, !(raw > 0.0) && T > 0.0 && A < K};
}

inline BoundCurve collective_curve(const BanditProblem& nu, const std::vector<std::uint64_t>& grid) {
  detail::check_grid(grid);
  BoundCurve c{bound_id::collective, {{"K", static_cast<double>(nu.size())}}, {}};
  for (std::uint64_t T : grid) {
    const auto b = collective_bound(nu, static_cast<double>(T));
    BoundPoint p = detail::clamped(T, b.regret);
    p.is_void = p.is_void || b.is_void;
    c.points.push_back(p);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Large-T bound

/// Super-consistency constant and per-arm continuity slopes.
struct LargeTConstants {
  double c_psi = 16.0;
  std::vector<double> omega;  // one per arm; ignored for optimal arms
};

/// C = c_psi and omega_a from the model's continuity slope at mu*.
inline LargeTConstants default_large_t_constants(const BanditProblem& nu, double c_psi = 16.0) {
  if (!(c_psi > 0.0) || !std::isfinite(c_psi)) throw DomainError("LargeTConstants: c_psi must be finite and > 0");
  LargeTConstants c{c_psi, std::vector<double>(nu.size(), 0.0)};
  for (std::size_t a = 0; a < nu.size(); ++a)
    if (!nu.is_optimal(a)) c.omega[a] = continuity_slope(nu.arm(a), nu.mu_star(), nu.model());
  return c;
}

struct LargeTBound {
  double value;  // may be negative
  double a_T;
  double b_T;
  double c_T;
  bool applicable;  // a_T, b_T, c_T all < 1
};

/// ln T / K_inf - (a_T + b_T + c_T) ln T - ln 2 / K_inf with
///   a_T = omega / K_inf (ln T)^-4, b_T = C H(nu) ln T / T, c_T = ln(K C (ln T)^9) / ln T.
inline LargeTBound large_t_bound(const BanditProblem& nu, std::size_t a, double T, const LargeTConstants& consts) {
  if (!(T >= 2.0)) throw DomainError("large_t_bound: T must be >= 2");
  if (a >= nu.size()) throw DomainError("large_t_bound: arm index out of range");
  if (consts.omega.size() != nu.size()) throw DomainError("large_t_bound: one omega per arm required");
  if (!(consts.c_psi > 0.0) || !std::isfinite(consts.c_psi)) throw DomainError("large_t_bound: c_psi must be > 0");
  const double omega = consts.omega[a];
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("large_t_bound: omega must be finite and >= 0");
  const ExtReal kinf = k_inf(nu.arm(a), nu.mu_star(), nu.model());
  if (!(kinf.value() > 0.0) || kinf.is_infinite()) throw DomainError("large_t_bound: K_inf(nu_a, mu*) must be in (0, inf)");
  const double k = kinf.value();
  const double lt = std::log(T);
  const double a_T = omega / k * std::pow(lt, -4.0);
  const double b_T = consts.c_psi * hardness_h(nu) * lt / T;
  const double c_T = std::log(static_cast<double>(nu.size()) * consts.c_psi * std::pow(lt, 9.0)) / lt;
  const double value = lt / k - (a_T + b_T + c_T) * lt - std::log(2.0) / k;
  return {value, a_T, b_T, c_T, a_T < 1.0 && b_T < 1.0 && c_T < 1.0};
}

/// Checks that every suboptimal arm admits the large-T bound.
inline void require_large_t_compatible(const BanditProblem& nu) {
  const std::string id = bound_id::large_t;
  if (!(is_exponential_family(nu.model()) || nu.model() == ModelTag::bounded_support))
    throw IncompatibleBound(id, "model " + std::string(to_string(nu.model())) + " is not well behaved");
  bool any = false;
  for (std::size_t a = 0; a < nu.size(); ++a) {
    if (nu.is_optimal(a)) continue;
    any = true;
    const ExtReal k = k_inf(nu.arm(a), nu.mu_star(), nu.model());
    if (k.is_infinite() || !(k.value() > 0.0))
      throw IncompatibleBound(id, "K_inf(nu_" + std::to_string(a + 1) + ", mu*) is not in (0, inf)");
  }
  if (!any) throw IncompatibleBound(id, "requires at least one suboptimal arm");
}

/// Regret sum_a Delta_a max(0, large_t_bound_a) when every suboptimal arm is
/// applicable at T, else nullopt.
inline std::optional<double> large_t_regret(const BanditProblem& nu, double T, const LargeTConstants& consts) {
  if (T < 2.0) return std::nullopt;
  double v = 0.0;
  for (std::size_t a = 0; a < nu.size(); ++a) {
    if (nu.is_optimal(a)) continue;
    const auto b = large_t_bound(nu, a, T, consts);
    if (!b.applicable) return std::nullopt;
    v += nu.gap(a) * std::max(0.0, b.value);
  }
  return v;
}

inline BoundCurve large_t_curve(const BanditProblem& nu, const std::vector<std::uint64_t>& grid,
                                const LargeTConstants& consts) {
  detail::check_grid(grid);
  require_large_t_compatible(nu);
  BoundCurve c{bound_id::large_t, {{"K", static_cast<double>(nu.size())}, {"c_psi", consts.c_psi}}, {}};
  for (std::uint64_t T : grid) {
    const auto r = large_t_regret(nu, static_cast<double>(T), consts);
    if (!r) {
      c.points.push_back({T, 0.0, true, ""});
    } else {
      c.points.push_back(detail::clamped(T, *r));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Envelope

/// Pointwise maximum of the collective, summed small-T absolute and (when
/// applicable) large-T regret bounds, tagged with the bound attaining it.
/// The large-T term is skipped when `consts` is empty.
inline BoundCurve envelope(const BanditProblem& nu, const std::vector<std::uint64_t>& grid,
                           const std::optional<LargeTConstants>& consts) {
  detail::check_grid(grid);
  const BoundCurve coll = collective_curve(nu, grid);
  const BoundCurve small = small_t_absolute_curve(nu, grid);
  BoundCurve c{bound_id::envelope, {{"K", static_cast<double>(nu.size())}}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t T = grid[i];
    double best = 0.0;
    std::string by;
    auto offer = [&](double v, const char* id) {
      if (v > best) {
        best = v;
        by = id;
      }
    };
    offer(coll.points[i].value, bound_id::collective);
    offer(small.points[i].value, bound_id::small_t_absolute);
    if (consts) {
      if (auto r = large_t_regret(nu, static_cast<double>(T), *consts)) offer(*r, bound_id::large_t);
    }
    c.points.push_back({T, best, best == 0.0 && T > 1, by});
  }
  return c;
}

}  // namespace bandit_lb
