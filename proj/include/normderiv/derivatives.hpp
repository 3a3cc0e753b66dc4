#ifndef NORMDERIV_DERIVATIVES_HPP
#define NORMDERIV_DERIVATIVES_HPP

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "ast.hpp"
#include "error.hpp"
#include "norm.hpp"
#include "vector.hpp"

namespace normderiv {

enum class side { plus, minus };

inline side opposite(side s) noexcept { return s == side::plus ? side::minus : side::plus; }
inline const char* to_string(side s) noexcept { return s == side::plus ? "plus" : "minus"; }

/// Parameters of rho_{alpha,beta}: alpha, beta in [0, 1) with 0 < alpha + beta < 1.
class alpha_beta {
public:
  alpha_beta(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha >= 0.0 && alpha < 1.0) || !(beta >= 0.0 && beta < 1.0))
      throw domain_error("alpha and beta must lie in [0, 1)");
    if (!(alpha + beta > 0.0 && alpha + beta < 1.0)) throw domain_error("alpha + beta must lie in (0, 1)");
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double total() const noexcept { return alpha_ + beta_; }

  /// (beta, alpha); always admissible when *this is.
  alpha_beta swapped() const noexcept { return {beta_, alpha_, unchecked{}}; }

  friend bool operator==(const alpha_beta&, const alpha_beta&) = default;

private:
  struct unchecked {};
  alpha_beta(double a, double b, unchecked) noexcept : alpha_(a), beta_(b) {}

  double alpha_;
  double beta_;
};

/// Weight of rho_- in rho_lambda; lambda in [0, 1].
class lambda_weight {
public:
  explicit lambda_weight(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) throw domain_error("lambda must lie in [0, 1]");
  }
  double value() const noexcept { return value_; }

  friend bool operator==(const lambda_weight&, const lambda_weight&) = default;

private:
  double value_;
};

enum class deriv_method { exact, numeric };

inline const char* to_string(deriv_method m) noexcept { return m == deriv_method::exact ? "exact" : "numeric"; }

/// A norm derivative value. For numeric results the true value lies in
/// [value - enclosure_width, value + enclosure_width]; `converged` is false
/// when the requested tolerance could not be reached and the best enclosure
/// found is returned instead.
struct deriv_result {
  double value = 0.0;
  deriv_method method = deriv_method::exact;
  double enclosure_width = 0.0;
  bool converged = true;
};

namespace detail {

inline constexpr double active_band = 1e-12;
inline constexpr double tie_band = 1e-12;

inline double sign(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// One-sided directional derivative of the norm at u != 0.
inline double dd(const norm_ast& n, vec_view u, vec_view v, side s) {
  const double pm = s == side::plus ? 1.0 : -1.0;
  switch (n.kind()) {
    case norm_kind::l1: {
      double smooth = 0.0, kink = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] != 0.0)
          smooth += sign(u[i]) * v[i];
        else
          kink += std::abs(v[i]);
      }
      return smooth + pm * kink;
    }
    case norm_kind::linf: {
      double m = 0.0;
      for (double x : u) m = std::max(m, std::abs(x));
      double best = s == side::plus ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (std::abs(u[i]) < (1.0 - active_band) * m) continue;
        const double d = sign(u[i]) * v[i];
        best = s == side::plus ? std::max(best, d) : std::min(best, d);
      }
      return best;
    }
    case norm_kind::l2: {
      const double r = eval_unchecked(n, u);
      double acc = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) acc += (u[i] / r) * v[i];
      return acc;
    }
    case norm_kind::lp: {
      const double p = n.param();
      const double r = eval_unchecked(n, u);
      double acc = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0.0) acc += std::pow(std::abs(u[i]) / r, p - 1.0) * sign(u[i]) * v[i];
      return acc;
    }
    case norm_kind::wlp: {
      const double p = n.param();
      const auto& w = n.weights();
      if (p == 1.0) {
        double smooth = 0.0, kink = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
          if (u[i] != 0.0)
            smooth += w[i] * sign(u[i]) * v[i];
          else
            kink += w[i] * std::abs(v[i]);
        }
        return smooth + pm * kink;
      }
      if (std::isinf(p)) {
        const double m = eval_unchecked(n, u);
        double best =
            s == side::plus ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < u.size(); ++i) {
          if (w[i] * std::abs(u[i]) < (1.0 - active_band) * m) continue;
          const double d = w[i] * sign(u[i]) * v[i];
          best = s == side::plus ? std::max(best, d) : std::min(best, d);
        }
        return best;
      }
      const double r = eval_unchecked(n, u);
      double acc = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0.0) acc += w[i] * std::pow(std::abs(u[i]) / r, p - 1.0) * sign(u[i]) * v[i];
      return acc;
    }
    case norm_kind::max: {
      const double a = eval_unchecked(n.left(), u);
      const double b = eval_unchecked(n.right(), u);
      if (std::abs(a - b) <= tie_band * std::max({a, b, 1.0})) {
        const double da = dd(n.left(), u, v, s);
        const double db = dd(n.right(), u, v, s);
        return s == side::plus ? std::max(da, db) : std::min(da, db);
      }
      return dd(a > b ? n.left() : n.right(), u, v, s);
    }
    case norm_kind::sum: return dd(n.left(), u, v, s) + dd(n.right(), u, v, s);
    case norm_kind::scale: return n.param() * dd(n.inner(), u, v, s);
  }
  return 0.0;
}

inline void check_pair(const norm_ast& n, vec_view u, vec_view v) {
  require_dim(n.dim(), u, "u");
  require_dim(n.dim(), v, "v");
}

}  // namespace detail

/// One-sided directional derivative D_{+/-} N(u; v) of the norm function,
/// evaluated in closed form by recursion over the norm expression. At u = 0
/// it is +||v|| (plus) or -||v|| (minus).
inline double dir_deriv_exact(const norm_ast& n, vec_view u, vec_view v, side s) {
  detail::check_pair(n, u, v);
  if (is_zero(u)) {
    const double r = eval_norm(n, v);
    return s == side::plus ? r : -r;
  }
  return detail::dd(n, u, v, s);
}

/// rho_{+/-}(u, v) = ||u|| * D_{+/-} N(u; v); zero when u = 0.
inline deriv_result rho_pm(const norm_ast& n, vec_view u, vec_view v, side s) {
  detail::check_pair(n, u, v);
  if (is_zero(u)) return {};
  return {eval_norm(n, u) * detail::dd(n, u, v, s), deriv_method::exact, 0.0, true};
}

/// rho_- and rho_+ at the same pair.
struct rho_pair {
  double minus = 0.0;
  double plus = 0.0;

  double gap() const noexcept { return plus - minus; }
};

inline rho_pair rho_both(const norm_ast& n, vec_view u, vec_view v) {
  detail::check_pair(n, u, v);
  if (is_zero(u)) return {};
  const double r = eval_norm(n, u);
  return {r * detail::dd(n, u, v, side::minus), r * detail::dd(n, u, v, side::plus)};
}

/// Numeric enclosure of rho_{+/-}(u, v) from difference quotients of the norm.
///
/// g(t) = (||u + t v|| - ||u||) / t is nondecreasing in t because the norm is
/// convex, so on the ladder t_k = t_0 2^-k
///
///   g(-t_k) <= D_- <= D_+ <= g(t_k).
///
/// That bracket (padded by a rounding bound) is reported whenever it is the
/// tightest available. While the bracket halves from level to level the
/// central quotient is used as well, with four times its Richardson error
/// estimate as radius, clipped to the bracket. At kinks the bracket cannot
/// shrink below D_+ - D_-; there the working-side quotient sequence is
/// extrapolated with its observed geometric tail instead. Iteration stops once the enclosure is narrower
/// than `tol` or t_k falls below 1e-14 ||u|| / ||v||.
inline deriv_result rho_pm_numeric(const norm_ast& n, vec_view u, vec_view v, side s, double tol) {
  detail::check_pair(n, u, v);
  if (!(tol > 0.0)) throw domain_error("tolerance must be positive");
  if (is_zero(u)) return {};
  const double nu = eval_norm(n, u);
  const double nv = eval_norm(n, v);
  if (nv == 0.0) return {0.0, deriv_method::numeric, 0.0, true};

  const double target = tol / nu;
  const double t0 = 1e-2 * nu / nv;
  const double t_floor = 1e-14 * nu / nv;
  const double rounding = (16.0 + 4.0 * static_cast<double>(u.size())) * DBL_EPSILON;
  auto quotient = [&](double t) { return (eval_norm(n, axpy(t, v, u)) - nu) / t; };

  // Enclosure [mid - half, mid + half] of D_{side}.
  double best_mid = 0.0;
  double best_half = std::numeric_limits<double>::infinity();
  double prev_side_q = std::numeric_limits<double>::quiet_NaN();
  double prev_d = std::numeric_limits<double>::quiet_NaN();
  double prev_bracket = std::numeric_limits<double>::infinity();
  double prev_prev_bracket = std::numeric_limits<double>::infinity();
  double prev_central = std::numeric_limits<double>::quiet_NaN();

  auto finish = [&](bool converged) {
    return deriv_result{nu * best_mid, deriv_method::numeric, nu * best_half, converged};
  };

  for (int k = 0;; ++k) {
    const double t = std::ldexp(t0, -k);
    if (t < t_floor) break;
    const double gp = quotient(t);
    const double gm = quotient(-t);
    const double r = rounding * (nu + t * nv) / t;
    const double lo = gm - r;
    const double hi = gp + r;
    const double bracket = hi - lo;

    if (bracket / 2 < best_half) {
      best_mid = (lo + hi) / 2;
      best_half = bracket / 2;
    }
    if (bracket < target) return finish(true);

    // While the bracket keeps halving the norm is differentiable along v here,
    // and the central quotient has an O(t^2) error that Richardson's
    // comparison of consecutive levels estimates.
    const double central = (gp + gm) / 2;
    const bool halving = k >= 2 && bracket < 0.6 * prev_bracket && prev_bracket < 0.6 * prev_prev_bracket;
    if (halving && !std::isnan(prev_central)) {
      const double err = std::abs(central - prev_central) / 3.0;
      const double half = 4.0 * err + r;
      const double a = std::max(central - half, lo);
      const double b = std::min(central + half, hi);
      if (b >= a && (b - a) / 2 < best_half) {
        best_mid = (a + b) / 2;
        best_half = (b - a) / 2;
      }
      if (best_half < target) return finish(true);
    }
    prev_central = central;
    prev_prev_bracket = prev_bracket;

    const double q = s == side::plus ? gp : gm;
    const bool kink = k > 0 && bracket > 8.0 * r && bracket > 0.75 * prev_bracket;
    if (kink && !std::isnan(prev_side_q)) {
      const double d = std::abs(q - prev_side_q);
      double tail = 0.0;
      bool usable = true;
      if (d > 0.0) {
        const double ratio = std::isnan(prev_d) || prev_d == 0.0 ? 1.0 : d / prev_d;
        usable = ratio < 0.95;
        tail = usable ? d * ratio / (1.0 - ratio) : 0.0;
      }
      if (usable) {
        // The working-side quotient is a one-sided bound; the tail estimate
        // supplies the other side.
        double a = s == side::plus ? q - 2.0 * tail - r : q - r;
        double b = s == side::plus ? q + r : q + 2.0 * tail + r;
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (b >= a && (b - a) / 2 < best_half) {
          best_mid = (a + b) / 2;
          best_half = (b - a) / 2;
        }
        if (d < target && best_half < target) return finish(true);
      }
      prev_d = d;
    } else if (!std::isnan(prev_side_q)) {
      prev_d = std::abs(q - prev_side_q);
    }
    prev_side_q = q;
    prev_bracket = bracket;
  }
  return finish(false);
}

/// rho = (rho_- + rho_+) / 2.
inline double rho(const norm_ast& n, vec_view u, vec_view v) {
  const rho_pair p = rho_both(n, u, v);
  return (p.minus + p.plus) / 2.0;
}

/// rho_lambda = lambda rho_- + (1 - lambda) rho_+.
inline double rho_lambda(const norm_ast& n, vec_view u, vec_view v, lambda_weight lambda) {
  const rho_pair p = rho_both(n, u, v);
  return lambda.value() * p.minus + (1.0 - lambda.value()) * p.plus;
}

/// rho_{alpha,beta} = alpha rho_- + beta rho_+.
inline double rho_ab(const norm_ast& n, vec_view u, vec_view v, alpha_beta ab) {
  const rho_pair p = rho_both(n, u, v);
  return ab.alpha() * p.minus + ab.beta() * p.plus;
}

/// Whether rho_+(u, v) and rho_-(u, v) agree to within 1e-12 ||u|| ||v||.
inline bool is_smooth_at(const norm_ast& n, vec_view u, vec_view v) {
  const rho_pair p = rho_both(n, u, v);
  return std::abs(p.gap()) <= 1e-12 * eval_norm(n, u) * eval_norm(n, v);
}

/// Semi-inner product [v, u] = rho_+(u, v), defined where the norm is smooth
/// at u in direction v. Throws nonsmooth_error otherwise.
inline double sip(const norm_ast& n, vec_view v, vec_view u) {
  detail::check_pair(n, u, v);
  if (is_zero(u)) throw zero_vector_error("semi-inner product [v, u] needs u != 0");
  const rho_pair p = rho_both(n, u, v);
  if (std::abs(p.gap()) > 1e-12 * eval_norm(n, u) * eval_norm(n, v))
    throw nonsmooth_error("norm is not smooth at u in direction v: rho_+ - rho_- = " + format_number(p.gap()));
  return p.plus;
}

}  // namespace normderiv

#endif
