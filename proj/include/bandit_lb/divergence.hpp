#pragma once
/// \file divergence.hpp
/// Scalar kernels shared by every other module: Bernoulli Kullback-Leibler
/// divergence, binary entropy, the principal branch of the Lambert W function
/// on [0, +inf), and the larger-root bound for (x - alpha)^2 <= beta x.
///
/// All kernels work in double precision and are pure.

#include <atomic>
#include <cmath>
#include <compare>
#include <limits>
#include <string>

#include "errors.hpp"

namespace bandit_lb {

/// A value in [0, +inf]. Used as the codomain of divergences, where +inf
/// marks a failure of absolute continuity.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  explicit ExtReal(double v) : v_(v) {
    if (std::isnan(v) || v < 0.0) throw DomainError("ExtReal: value must be in [0, +inf], got " + std::to_string(v));
  }
  static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  double value() const noexcept { return v_; }
  bool is_finite() const noexcept { return std::isfinite(v_); }
  bool is_infinite() const noexcept { return std::isinf(v_); }

  friend auto operator<=>(ExtReal a, ExtReal b) noexcept { return a.v_ <=> b.v_; }
  friend bool operator==(ExtReal a, ExtReal b) noexcept { return a.v_ == b.v_; }
  friend auto operator<=>(ExtReal a, double b) noexcept { return a.v_ <=> b; }
  friend bool operator==(ExtReal a, double b) noexcept { return a.v_ == b; }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v_ + b.v_); }
  /// Scaling by a non-negative weight; 0 * inf is taken as 0.
  friend ExtReal operator*(double w, ExtReal a) {
    if (w == 0.0) return ExtReal(0.0);
    return ExtReal(w * a.v_);
  }

 private:
  double v_ = 0.0;
};

namespace testing {
/// Fault-injection hook for negative controls of the verification battery.
/// When set, bernoulli_kl subtracts its second term instead of adding it.
inline std::atomic<bool>& kl_sign_fault() {
  static std::atomic<bool> flag{false};
  return flag;
}
}  // namespace testing

namespace detail {
inline void require_probability(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0 || x > 1.0) throw DomainError(std::string(what) + " must be a probability in [0,1]");
}

// x ln(x / y) with 0 ln(0/y) = 0 and x ln(x/0) = +inf for x > 0.
inline double xlogx_over_y(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return std::numeric_limits<double>::infinity();
  return x * std::log(x / y);
}
}  // namespace detail

/// kl(p, q) = p ln(p/q) + (1-p) ln((1-p)/(1-q)), the divergence between
/// Bernoulli(p) and Bernoulli(q). Returns +inf when q = 0 < p or p < 1 = q.
inline ExtReal bernoulli_kl(double p, double q) {
  detail::require_probability(p, "bernoulli_kl: p");
  detail::require_probability(q, "bernoulli_kl: q");
  const double first = detail::xlogx_over_y(p, q);
  const double second = detail::xlogx_over_y(1.0 - p, 1.0 - q);
  if (std::isinf(first) || std::isinf(second)) return ExtReal::infinity();
  if (testing::kl_sign_fault().load(std::memory_order_relaxed)) {
    // Negative control only: the result may be negative, so bypass ExtReal validation.
    const double faulty = first - second;
    return ExtReal(faulty < 0.0 ? 0.0 : faulty);
  }
  // Rounding can leave a tiny negative value when p and q are very close.
  const double v = first + second;
  return ExtReal(v < 0.0 ? 0.0 : v);
}

/// h(x) = -(x ln x + (1-x) ln(1-x)), with 0 ln 0 = 0.
inline double binary_entropy(double x) {
  detail::require_probability(x, "binary_entropy: x");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log(x);
  if (x < 1.0) h -= (1.0 - x) * std::log1p(-x);
  return h;
}

/// Principal branch of the Lambert W function restricted to u >= 0: the
/// unique v >= 0 with v e^v = u.
///
/// Halley iteration from max(ln(1+u) - ln ln(e+u), u/(1+u)), finished by a
/// residual check |v e^v - u| <= 1e-12 max(1, u).
inline double lambert_w(double u) {
  if (std::isnan(u) || u < 0.0) throw DomainError("lambert_w: argument must be >= 0");
  if (u == 0.0) return 0.0;
  if (std::isinf(u)) return u;

  double v = std::max(std::log1p(u) - std::log(std::log(M_E + u)), u / (1.0 + u));
  for (int it = 0; it < 100; ++it) {
    const double ev = std::exp(v);
    const double f = v * ev - u;
    const double fp = ev * (v + 1.0);
    const double step = f / (fp - (v + 2.0) * f / (2.0 * (v + 1.0)));
    double next = v - step;
    if (next < 0.0) next = v / 2.0;
    if (std::abs(next - v) <= 1e-16 * std::max(1.0, std::abs(v))) {
      v = next;
      break;
    }
    v = next;
  }
  // Residual certificate, relative for large u.
  const double residual = std::abs(v * std::exp(v) - u);
  if (!(residual <= 1e-12 * std::max(1.0, u)))
    throw DomainError("lambert_w: failed to certify residual for u = " + std::to_string(u));
  return v;
}

/// If (x - alpha)^2 <= beta x with alpha, beta >= 0 then x <= alpha + beta + sqrt(alpha beta).
inline double quadratic_root_bound(double alpha, double beta) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw DomainError("quadratic_root_bound: alpha and beta must be >= 0");
  return alpha + beta + std::sqrt(alpha * beta);
}

/// Largest q in [p, 1] with count * kl(p, q) <= level, found by bisection to
/// `tol`. Used by the KL-UCB index.
inline double kl_upper_confidence(double p, double count, double level, double tol = 1e-9) {
  detail::require_probability(p, "kl_upper_confidence: p");
  if (count <= 0.0) return 1.0;
  const double budget = level / count;
  double lo = p;
  double hi = 1.0;
  if (bernoulli_kl(p, hi).value() <= budget) return hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (bernoulli_kl(p, mid).value() <= budget)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace bandit_lb
