#pragma once
/// \file models.hpp
/// Reward distributions, bandit problems and the model-relative quantities
/// built on them: means, closed-form KL divergences, K_inf, the continuity
/// increments of well-behaved models, the hardness H(nu) and K_max.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "divergence.hpp"
#include "errors.hpp"

namespace bandit_lb {

struct Bernoulli {
  double p = 0.5;
  bool operator==(const Bernoulli&) const = default;
};
/// Normal law; the variance is a known model parameter.
struct Gaussian {
  double mean = 0.0;
  double variance = 1.0;
  bool operator==(const Gaussian&) const = default;
};
struct Poisson {
  double mean = 1.0;
  bool operator==(const Poisson&) const = default;
};
/// Gamma law with known shape, parametrized by its mean (scale = mean / shape).
struct Gamma {
  double shape = 1.0;
  double mean = 1.0;
  bool operator==(const Gamma&) const = default;
};
struct Binomial {
  int trials = 1;
  double mean = 0.5;
  bool operator==(const Binomial&) const = default;
};
struct Dirac {
  double point = 0.0;
  bool operator==(const Dirac&) const = default;
};
/// Finitely supported law on [0, ceiling].
struct Finite {
  std::vector<double> points;
  std::vector<double> weights;
  double ceiling = 1.0;
  bool operator==(const Finite&) const = default;
};

using Distribution = std::variant<Bernoulli, Gaussian, Poisson, Gamma, Binomial, Dirac, Finite>;

/// The set D of laws the arms may take. K_inf depends on it.
enum class ModelTag { bernoulli, gaussian, poisson, gamma, binomial, dirac, bounded_support };

inline std::string_view to_string(ModelTag m) {
  switch (m) {
    case ModelTag::bernoulli: return "bernoulli";
    case ModelTag::gaussian: return "gaussian";
    case ModelTag::poisson: return "poisson";
    case ModelTag::gamma: return "gamma";
    case ModelTag::binomial: return "binomial";
    case ModelTag::dirac: return "dirac";
    case ModelTag::bounded_support: return "bounded_support";
  }
  return "?";
}

inline ModelTag model_from_string(std::string_view s) {
  for (auto m : {ModelTag::bernoulli, ModelTag::gaussian, ModelTag::poisson, ModelTag::gamma, ModelTag::binomial,
                 ModelTag::dirac, ModelTag::bounded_support})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown model tag '" + std::string(s) + "'");
}

/// The model a distribution naturally belongs to.
inline ModelTag natural_model(const Distribution& d) {
  struct V {
    ModelTag operator()(const Bernoulli&) const { return ModelTag::bernoulli; }
    ModelTag operator()(const Gaussian&) const { return ModelTag::gaussian; }
    ModelTag operator()(const Poisson&) const { return ModelTag::poisson; }
    ModelTag operator()(const Gamma&) const { return ModelTag::gamma; }
    ModelTag operator()(const Binomial&) const { return ModelTag::binomial; }
    ModelTag operator()(const Dirac&) const { return ModelTag::dirac; }
    ModelTag operator()(const Finite&) const { return ModelTag::bounded_support; }
  };
  return std::visit(V{}, d);
}

inline std::string family_name(const Distribution& d) { return std::string(to_string(natural_model(d))); }

/// Throws DomainError unless the parameters lie in their stated ranges.
inline void validate(const Distribution& d) {
  struct V {
    static bool ok(double v) { return std::isfinite(v); }
    void operator()(const Bernoulli& b) const {
      if (!ok(b.p) || b.p < 0.0 || b.p > 1.0) throw DomainError("Bernoulli: p must be in [0,1]");
    }
    void operator()(const Gaussian& g) const {
      if (!ok(g.mean) || !ok(g.variance) || g.variance <= 0.0)
        throw DomainError("Gaussian: mean must be finite and variance > 0");
    }
    void operator()(const Poisson& p) const {
      if (!ok(p.mean) || p.mean <= 0.0) throw DomainError("Poisson: mean must be > 0");
    }
    void operator()(const Gamma& g) const {
      if (!ok(g.shape) || !ok(g.mean) || g.shape <= 0.0 || g.mean <= 0.0)
        throw DomainError("Gamma: shape and mean must be > 0");
    }
    void operator()(const Binomial& b) const {
      if (b.trials < 1) throw DomainError("Binomial: trials must be >= 1");
      if (!ok(b.mean) || b.mean <= 0.0 || b.mean >= b.trials) throw DomainError("Binomial: mean must be in (0, n)");
    }
    void operator()(const Dirac& d) const {
      if (!ok(d.point)) throw DomainError("Dirac: point must be finite");
    }
    void operator()(const Finite& f) const {
      if (!ok(f.ceiling) || f.ceiling <= 0.0) throw DomainError("Finite: ceiling M must be > 0");
      if (f.points.empty() || f.points.size() != f.weights.size())
        throw DomainError("Finite: points and weights must be non-empty and of equal length");
      double total = 0.0;
      for (std::size_t i = 0; i < f.points.size(); ++i) {
        if (!ok(f.points[i]) || f.points[i] < 0.0 || f.points[i] > f.ceiling)
          throw DomainError("Finite: support point outside [0, M]");
        if (!ok(f.weights[i]) || f.weights[i] < 0.0) throw DomainError("Finite: weights must be >= 0");
        total += f.weights[i];
      }
      if (std::abs(total - 1.0) > 1e-12) throw DomainError("Finite: weights must sum to 1");
    }
  };
  std::visit(V{}, d);
}

inline double mean(const Distribution& d) {
  struct V {
    double operator()(const Bernoulli& b) const { return b.p; }
    double operator()(const Gaussian& g) const { return g.mean; }
    double operator()(const Poisson& p) const { return p.mean; }
    double operator()(const Gamma& g) const { return g.mean; }
    double operator()(const Binomial& b) const { return b.mean; }
    double operator()(const Dirac& d) const { return d.point; }
    double operator()(const Finite& f) const {
      double m = 0.0;
      for (std::size_t i = 0; i < f.points.size(); ++i) m += f.weights[i] * f.points[i];
      return m;
    }
  };
  return std::visit(V{}, d);
}

namespace detail {

inline double finite_kl(const Finite& a, const Finite& b) {
  std::map<double, double> wb;
  for (std::size_t i = 0; i < b.points.size(); ++i) wb[b.points[i]] += b.weights[i];
  std::map<double, double> wa;
  for (std::size_t i = 0; i < a.points.size(); ++i) wa[a.points[i]] += a.weights[i];
  double kl = 0.0;
  for (const auto& [x, w] : wa) {
    if (w == 0.0) continue;
    auto it = wb.find(x);
    if (it == wb.end() || it->second == 0.0) return std::numeric_limits<double>::infinity();
    kl += w * std::log(w / it->second);
  }
  return std::max(kl, 0.0);
}

[[noreturn]] inline void family_mismatch(const Distribution& a, const Distribution& b) {
  throw ModelMismatch("kl_div: family mismatch (" + family_name(a) + " vs " + family_name(b) + ")");
}

}  // namespace detail

/// KL(d1, d2) in closed form for two members of the same family.
inline ExtReal kl_div(const Distribution& d1, const Distribution& d2) {
  if (d1.index() != d2.index()) detail::family_mismatch(d1, d2);
  const double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [&](const auto& a) -> ExtReal {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(d2);
        if constexpr (std::is_same_v<T, Bernoulli>) {
          return bernoulli_kl(a.p, b.p);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          if (a.variance != b.variance) throw ModelMismatch("kl_div: Gaussian variances differ");
          const double d = a.mean - b.mean;
          return ExtReal(d * d / (2.0 * a.variance));
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return ExtReal(std::max(0.0, b.mean - a.mean + a.mean * std::log(a.mean / b.mean)));
        } else if constexpr (std::is_same_v<T, Gamma>) {
          if (a.shape != b.shape) throw ModelMismatch("kl_div: Gamma shapes differ");
          const double r = a.mean / b.mean;
          return ExtReal(std::max(0.0, a.shape * (r - 1.0 - std::log(r))));
        } else if constexpr (std::is_same_v<T, Binomial>) {
          if (a.trials != b.trials) throw ModelMismatch("kl_div: Binomial trial counts differ");
          const double n = a.trials;
          return ExtReal(
              std::max(0.0, a.mean * std::log(a.mean / b.mean) + (n - a.mean) * std::log((n - a.mean) / (n - b.mean))));
        } else if constexpr (std::is_same_v<T, Dirac>) {
          return ExtReal(a.point == b.point ? 0.0 : inf);
        } else {
          return ExtReal(detail::finite_kl(a, b));
        }
      },
      d1);
}

/// True when the distribution can be an arm of the given model.
inline bool belongs_to(const Distribution& d, ModelTag model) { return natural_model(d) == model; }

/// Open interval of means spanned by an exponential family whose known
/// parameter is taken from `d`.
struct MeanRange {
  double lower;
  double upper;
};

inline MeanRange mean_range(const Distribution& d) {
  const double inf = std::numeric_limits<double>::infinity();
  struct V {
    double inf;
    MeanRange operator()(const Bernoulli&) const { return {0.0, 1.0}; }
    MeanRange operator()(const Gaussian&) const { return {-inf, inf}; }
    MeanRange operator()(const Poisson&) const { return {0.0, inf}; }
    MeanRange operator()(const Gamma&) const { return {0.0, inf}; }
    MeanRange operator()(const Binomial& b) const { return {0.0, static_cast<double>(b.trials)}; }
    MeanRange operator()(const Dirac&) const { return {-inf, inf}; }
    MeanRange operator()(const Finite& f) const { return {0.0, f.ceiling}; }
  };
  return std::visit(V{inf}, d);
}

/// The member of d's exponential family with mean `m` (same known parameter).
inline Distribution family_member(const Distribution& d, double m) {
  struct V {
    double m;
    Distribution operator()(const Bernoulli&) const { return Bernoulli{m}; }
    Distribution operator()(const Gaussian& g) const { return Gaussian{m, g.variance}; }
    Distribution operator()(const Poisson&) const { return Poisson{m}; }
    Distribution operator()(const Gamma& g) const { return Gamma{g.shape, m}; }
    Distribution operator()(const Binomial& b) const { return Binomial{b.trials, m}; }
    Distribution operator()(const Dirac&) const { return Dirac{m}; }
    Distribution operator()(const Finite&) const { throw ModelMismatch("family_member: Finite is not a family"); }
  };
  return std::visit(V{m}, d);
}

inline bool is_exponential_family(ModelTag m) {
  return m == ModelTag::bernoulli || m == ModelTag::gaussian || m == ModelTag::poisson || m == ModelTag::gamma ||
         m == ModelTag::binomial;
}

/// K_inf for the bounded-support model via the concave dual
///   max_{lambda in [0, 1/(M-x)]} sum_i w_i ln(1 - lambda (x_i - x)),
/// maximized by golden-section search to a bracket width of `tol`.
inline ExtReal k_inf_bounded_support(const Finite& f, double x, double tol = 1e-10) {
  const double M = f.ceiling;
  if (x >= M) return ExtReal::infinity();
  if (mean(Distribution{f}) >= x) return ExtReal(0.0);

  auto phi = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      if (f.weights[i] == 0.0) continue;
      const double arg = 1.0 - lambda * (f.points[i] - x);
      if (arg <= 0.0) return -std::numeric_limits<double>::infinity();
      s += f.weights[i] * std::log(arg);
    }
    return s;
  };

  const double hi_end = 1.0 / (M - x);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = hi_end;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = phi(d);
    }
  }
  double best = std::max({0.0, fc, fd, phi(0.5 * (a + b))});
  // The maximum may sit at the right end when no mass is at M.
  best = std::max(best, phi(hi_end));
  return ExtReal(best);
}

/// K_inf(d, x) = inf { KL(d, d') : d' in model, E(d') > x }, with the value
/// 0 at mean(d) = x (continuity from below) and +inf for an empty infimum.
inline ExtReal k_inf(const Distribution& d, double x, ModelTag model) {
  if (!belongs_to(d, model))
    throw ModelMismatch("k_inf: " + family_name(d) + " arm is not in model " + std::string(to_string(model)));
  if (std::isnan(x)) throw DomainError("k_inf: x is NaN");
  const double mu = mean(d);
  if (mu >= x) return ExtReal(0.0);
  if (model == ModelTag::dirac) return ExtReal::infinity();
  if (model == ModelTag::bounded_support) return k_inf_bounded_support(std::get<Finite>(d), x);
  const MeanRange range = mean_range(d);
  if (x >= range.upper) return ExtReal::infinity();
  return kl_div(d, family_member(d, x));
}

/// G_{mu*}: the per-family bound on the second derivative of the KL
/// representation function over [mu*, mu* + B_{mu*}].
inline double curvature_bound(const Distribution& d, double mu_star) {
  struct V {
    double m;
    double operator()(const Bernoulli&) const { return 2.0 / (m * (1.0 - m)); }
    double operator()(const Gaussian& g) const { return 1.0 / g.variance; }
    double operator()(const Poisson&) const { return 1.0 / m; }
    double operator()(const Gamma& g) const { return g.shape / (m * m); }
    double operator()(const Binomial& b) const { return 2.0 * b.trials / (m * (b.trials - m)); }
    double operator()(const Dirac&) const { throw ModelMismatch("curvature_bound: Dirac is not an exponential family"); }
    double operator()(const Finite&) const { throw ModelMismatch("curvature_bound: Finite is not an exponential family"); }
  };
  const MeanRange r = mean_range(d);
  if (!(mu_star > r.lower && mu_star < r.upper)) throw DomainError("curvature_bound: mu* outside the family's mean range");
  return std::visit(V{mu_star}, d);
}

/// B_{mu*} = min{(sup I - mu*)/2, 1}.
inline double exp_family_eps_range(const Distribution& d, double mu_star) {
  const MeanRange r = mean_range(d);
  return std::min((r.upper - mu_star) / 2.0, 1.0);
}

/// Slope omega(d, mu*) of the linear continuity bound
/// K_inf(d, mu* + eps) <= K_inf(d, mu*) + eps * omega.
inline double continuity_slope(const Distribution& d, double mu_star, ModelTag model) {
  if (!belongs_to(d, model)) throw ModelMismatch("continuity_slope: arm not in model");
  if (model == ModelTag::bounded_support) {
    const double M = std::get<Finite>(d).ceiling;
    if (!(mu_star >= 0.0 && mu_star < M)) throw DomainError("continuity_slope: mu* must be in [0, M)");
    return 4.0 / (M - mu_star);
  }
  if (!is_exponential_family(model)) throw ModelMismatch("continuity_slope: model is not well behaved");
  const double B = exp_family_eps_range(d, mu_star);
  const double G = curvature_bound(d, mu_star);
  return std::max(0.0, (mu_star + B - mean(d)) * G);
}

/// Upper bound on K_inf(d, mu* + eps) - K_inf(d, mu*) for the model.
/// Valid ranges: bounded support 0 < eps < (M - mu*)/4; exponential
/// families 0 < eps < B_{mu*}.
inline double k_inf_continuity_increment(const Distribution& d, double mu_star, double eps, ModelTag model) {
  if (!belongs_to(d, model)) throw ModelMismatch("k_inf_continuity_increment: arm not in model");
  if (model == ModelTag::bounded_support) {
    const double M = std::get<Finite>(d).ceiling;
    if (!(mu_star >= 0.0 && mu_star < M)) throw DomainError("k_inf_continuity_increment: mu* must be in [0, M)");
    if (!(eps > 0.0 && eps < (M - mu_star) / 4.0))
      throw DomainError("k_inf_continuity_increment: eps must be in (0, (M - mu*)/4)");
  } else if (is_exponential_family(model)) {
    const MeanRange r = mean_range(d);
    if (!(mu_star > r.lower && mu_star < r.upper)) throw DomainError("k_inf_continuity_increment: mu* outside I");
    const double B = exp_family_eps_range(d, mu_star);
    if (!(eps > 0.0 && eps < B)) throw DomainError("k_inf_continuity_increment: eps must be in (0, B_mu*)");
  } else {
    throw ModelMismatch("k_inf_continuity_increment: model is not well behaved");
  }
  return eps * continuity_slope(d, mu_star, model);
}

/// An ordered list of K >= 2 arms sharing one model.
class BanditProblem {
 public:
  BanditProblem(std::vector<Distribution> arms, ModelTag model) : arms_(std::move(arms)), model_(model) {
    if (arms_.size() < 2) throw DomainError("BanditProblem: need at least two arms");
    for (const auto& d : arms_) {
      validate(d);
      if (!belongs_to(d, model_))
        throw ModelMismatch("BanditProblem: " + family_name(d) + " arm in model " + std::string(to_string(model_)));
    }
    check_known_parameters();
    means_.reserve(arms_.size());
    for (const auto& d : arms_) means_.push_back(mean(d));
    mu_star_ = *std::max_element(means_.begin(), means_.end());
    const double mu_min = *std::min_element(means_.begin(), means_.end());
    for (std::size_t a = 0; a < arms_.size(); ++a) {
      gaps_.push_back(mu_star_ - means_[a]);
      if (means_[a] == mu_star_) optimal_.push_back(a);
      if (means_[a] == mu_min) worst_.push_back(a);
    }
  }

  /// Single-family problem whose model is the arms' natural one.
  explicit BanditProblem(std::vector<Distribution> arms)
      : BanditProblem(arms, arms.empty() ? ModelTag::bernoulli : natural_model(arms.front())) {}

  std::size_t size() const noexcept { return arms_.size(); }
  const std::vector<Distribution>& arms() const noexcept { return arms_; }
  const Distribution& arm(std::size_t a) const { return arms_.at(a); }
  ModelTag model() const noexcept { return model_; }
  const std::vector<double>& means() const noexcept { return means_; }
  double mu_star() const noexcept { return mu_star_; }
  const std::vector<double>& gaps() const noexcept { return gaps_; }
  double gap(std::size_t a) const { return gaps_.at(a); }
  /// A*(nu), ascending arm indices.
  const std::vector<std::size_t>& optimal_arms() const noexcept { return optimal_; }
  /// W(nu): all arms attaining the minimal mean.
  const std::vector<std::size_t>& worst_arms() const noexcept { return worst_; }
  bool is_optimal(std::size_t a) const { return gaps_.at(a) == 0.0; }

  bool operator==(const BanditProblem& o) const { return model_ == o.model_ && arms_ == o.arms_; }

 private:
  void check_known_parameters() const {
    const Distribution& first = arms_.front();
    for (const auto& d : arms_) {
      bool same = true;
      if (auto* g = std::get_if<Gaussian>(&d)) same = g->variance == std::get<Gaussian>(first).variance;
      if (auto* g = std::get_if<Gamma>(&d)) same = g->shape == std::get<Gamma>(first).shape;
      if (auto* b = std::get_if<Binomial>(&d)) same = b->trials == std::get<Binomial>(first).trials;
      if (auto* f = std::get_if<Finite>(&d)) same = f->ceiling == std::get<Finite>(first).ceiling;
      if (!same) throw ModelMismatch("BanditProblem: arms disagree on the model's known parameter");
    }
  }

  std::vector<Distribution> arms_;
  ModelTag model_;
  std::vector<double> means_;
  double mu_star_ = 0.0;
  std::vector<double> gaps_;
  std::vector<std::size_t> optimal_;
  std::vector<std::size_t> worst_;
};

/// Bernoulli problem from a list of means.
inline BanditProblem bernoulli_problem(const std::vector<double>& means) {
  std::vector<Distribution> arms;
  for (double m : means) arms.emplace_back(Bernoulli{m});
  return BanditProblem(std::move(arms), ModelTag::bernoulli);
}

/// Bernoulli problem with means (0.05, 0.04, 0.02, 0.015, 0.01, 0.005).
inline BanditProblem figure1_problem() { return bernoulli_problem({0.05, 0.04, 0.02, 0.015, 0.01, 0.005}); }

/// H(nu) = sum over suboptimal arms of 1 / Delta_a^2.
inline double hardness_h(const BanditProblem& nu) {
  double h = 0.0;
  for (std::size_t a = 0; a < nu.size(); ++a)
    if (!nu.is_optimal(a)) h += 1.0 / (nu.gap(a) * nu.gap(a));
  return h;
}

/// K_max = min over worst arms w of max over optimal arms a* of KL(nu_w, nu_a*).
inline ExtReal k_max(const BanditProblem& nu) {
  ExtReal best = ExtReal::infinity();
  for (std::size_t w : nu.worst_arms()) {
    ExtReal worst_case(0.0);
    for (std::size_t s : nu.optimal_arms()) worst_case = std::max(worst_case, kl_div(nu.arm(w), nu.arm(s)));
    best = std::min(best, worst_case);
  }
  return best;
}

/// K_inf(nu_a, mu*) for every arm (0 for optimal arms).
inline std::vector<ExtReal> k_inf_to_optimum(const BanditProblem& nu) {
  std::vector<ExtReal> out;
  out.reserve(nu.size());
  for (std::size_t a = 0; a < nu.size(); ++a) out.push_back(k_inf(nu.arm(a), nu.mu_star(), nu.model()));
  return out;
}

}  // namespace bandit_lb
