#ifndef NORMDERIV_ORTHOGONALITY_HPP
#define NORMDERIV_ORTHOGONALITY_HPP

#include <cctype>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ast.hpp"
#include "derivatives.hpp"
#include "error.hpp"
#include "golden.hpp"
#include "norm.hpp"
#include "parallel.hpp"
#include "vector.hpp"

namespace normderiv {

enum class relation_tag { birkhoff, rho_plus, rho_minus, rho, rho_lambda, rho_ab, isosceles, pythagorean, semi };

/// An orthogonality relation, with its parameter where it has one.
class relation {
public:
  static relation birkhoff() { return relation(relation_tag::birkhoff); }
  static relation rho_plus() { return relation(relation_tag::rho_plus); }
  static relation rho_minus() { return relation(relation_tag::rho_minus); }
  static relation rho() { return relation(relation_tag::rho); }
  static relation rho_lambda(lambda_weight l) {
    relation r(relation_tag::rho_lambda);
    r.lambda_ = l;
    return r;
  }
  static relation rho_ab(alpha_beta ab) {
    relation r(relation_tag::rho_ab);
    r.ab_ = ab;
    return r;
  }
  static relation isosceles() { return relation(relation_tag::isosceles); }
  static relation pythagorean() { return relation(relation_tag::pythagorean); }
  static relation semi() { return relation(relation_tag::semi); }

  relation_tag tag() const noexcept { return tag_; }
  lambda_weight lambda() const { return lambda_.value(); }
  alpha_beta ab() const { return ab_.value(); }

  friend bool operator==(const relation&, const relation&) = default;

private:
  explicit relation(relation_tag t) : tag_(t) {}

  relation_tag tag_;
  std::optional<lambda_weight> lambda_;
  std::optional<alpha_beta> ab_;
};

inline std::string to_string(const relation& r) {
  switch (r.tag()) {
    case relation_tag::birkhoff: return "birkhoff";
    case relation_tag::rho_plus: return "rho_plus";
    case relation_tag::rho_minus: return "rho_minus";
    case relation_tag::rho: return "rho";
    case relation_tag::rho_lambda: return "rho_lambda(" + format_number(r.lambda().value()) + ")";
    case relation_tag::rho_ab:
      return "rho_ab(" + format_number(r.ab().alpha()) + "," + format_number(r.ab().beta()) + ")";
    case relation_tag::isosceles: return "isosceles";
    case relation_tag::pythagorean: return "pythagorean";
    case relation_tag::semi: return "semi";
  }
  return {};
}

/// Parses a relation tag. "rho_ab" and "rho_lambda" take their parameters
/// either inline ("rho_ab(0.3,0.4)", "rho_lambda(0.5)") or from the
/// defaults; a missing parameter is a domain_error.
inline relation parse_relation(std::string_view text, std::optional<alpha_beta> default_ab = std::nullopt,
                               std::optional<lambda_weight> default_lambda = std::nullopt) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  std::string_view name = text;
  std::optional<vec> args;
  if (auto open = text.find('('); open != std::string_view::npos) {
    if (text.back() != ')') throw syntax_error("relation parameters must end with ')'", text.size());
    name = trim(text.substr(0, open));
    args = parse_vector(text.substr(open + 1, text.size() - open - 2));
  }
  auto no_args = [&](relation r) {
    if (args) throw syntax_error("relation '" + std::string(name) + "' takes no parameters", name.size());
    return r;
  };
  if (name == "birkhoff") return no_args(relation::birkhoff());
  if (name == "rho_plus") return no_args(relation::rho_plus());
  if (name == "rho_minus") return no_args(relation::rho_minus());
  if (name == "rho") return no_args(relation::rho());
  if (name == "isosceles") return no_args(relation::isosceles());
  if (name == "pythagorean") return no_args(relation::pythagorean());
  if (name == "semi") return no_args(relation::semi());
  if (name == "rho_lambda") {
    if (args) {
      if (args->size() != 1) throw syntax_error("rho_lambda takes one parameter", name.size());
      return relation::rho_lambda(lambda_weight((*args)[0]));
    }
    if (!default_lambda) throw domain_error("rho_lambda needs a lambda parameter");
    return relation::rho_lambda(*default_lambda);
  }
  if (name == "rho_ab") {
    if (args) {
      if (args->size() != 2) throw syntax_error("rho_ab takes two parameters", name.size());
      return relation::rho_ab(alpha_beta((*args)[0], (*args)[1]));
    }
    if (!default_ab) throw domain_error("rho_ab needs alpha and beta");
    return relation::rho_ab(*default_ab);
  }
  throw syntax_error("unknown relation '" + std::string(name) + "'", 0);
}

/// Outcome of an orthogonality test. `residual` is the signed defining
/// quantity; `holds` iff |residual| <= tolerance.
struct ortho_verdict {
  bool holds = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

namespace detail {

inline ortho_verdict verdict(double residual, double tol) { return {std::abs(residual) <= tol, residual, tol}; }

}  // namespace detail

/// Decides u ⊥ v for `rel` under the norm `n`.
///
/// Residuals: the defining functional for the rho family; ||u+v|| - ||u-v||
/// for isosceles; ||u-v||^2 - ||u||^2 - ||v||^2 for Pythagorean; [v, u] for
/// semi. Birkhoff uses rho_-(u,v) <= 0 <= rho_+(u,v); its residual is rho_-
/// when positive, rho_+ when negative and 0 otherwise.
inline ortho_verdict is_orthogonal(const relation& rel, const norm_ast& n, vec_view u, vec_view v, double tol) {
  detail::check_pair(n, u, v);
  switch (rel.tag()) {
    case relation_tag::birkhoff: {
      const rho_pair p = rho_both(n, u, v);
      const double residual = p.minus > 0.0 ? p.minus : (p.plus < 0.0 ? p.plus : 0.0);
      return {p.minus <= tol && p.plus >= -tol, residual, tol};
    }
    case relation_tag::rho_plus: return detail::verdict(rho_pm(n, u, v, side::plus).value, tol);
    case relation_tag::rho_minus: return detail::verdict(rho_pm(n, u, v, side::minus).value, tol);
    case relation_tag::rho: return detail::verdict(normderiv::rho(n, u, v), tol);
    case relation_tag::rho_lambda: return detail::verdict(normderiv::rho_lambda(n, u, v, rel.lambda()), tol);
    case relation_tag::rho_ab: return detail::verdict(normderiv::rho_ab(n, u, v, rel.ab()), tol);
    case relation_tag::isosceles:
      return detail::verdict(eval_norm(n, axpy(1.0, v, u)) - eval_norm(n, axpy(-1.0, v, u)), tol);
    case relation_tag::pythagorean: {
      const double d = eval_norm(n, axpy(-1.0, v, u));
      const double a = eval_norm(n, u);
      const double b = eval_norm(n, v);
      return detail::verdict(d * d - a * a - b * b, tol);
    }
    case relation_tag::semi: return detail::verdict(sip(n, v, u), tol);
  }
  return {};
}

/// Birkhoff-James test straight from the definition ||u + t v|| >= ||u|| for
/// all t, without norm derivatives. The convex function t -> ||u + t v|| is
/// minimized by 200 golden-section steps on [-T, T], T = 4 ||u|| / ||v||
/// (any minimizer satisfies |t| <= 2 ||u|| / ||v||).
///
/// The residual is the secant slope ||u|| (min - ||u||) / |t_min|, in the
/// same units as rho_{+/-}; a drop below rounding level counts as none.
/// By convexity |residual| never exceeds the violated one-sided derivative.
inline ortho_verdict birkhoff_oracle(const norm_ast& n, vec_view u, vec_view v, double tol) {
  detail::check_pair(n, u, v);
  if (is_zero(u) || is_zero(v)) throw zero_vector_error("Birkhoff oracle needs nonzero u and v");
  const double nu = eval_norm(n, u);
  const double nv = eval_norm(n, v);
  const double bound = 4.0 * nu / nv;
  const line_minimum m =
      golden_section_minimize([&](double t) { return eval_norm(n, axpy(t, v, u)); }, -bound, bound, 200);
  const double drop = nu - std::min(m.fx, nu);
  const double rounding = (16.0 + 4.0 * static_cast<double>(u.size())) * DBL_EPSILON * (nu + std::abs(m.x) * nv);
  const double residual = drop <= rounding || m.x == 0.0 ? 0.0 : -nu * drop / std::abs(m.x);
  return detail::verdict(residual, tol);
}

struct closed_interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double t) const noexcept { return lower <= t && t <= upper; }
};

/// All t with u ⊥_B (t u + v): [-rho_+(u,v) / ||u||^2, -rho_-(u,v) / ||u||^2].
inline closed_interval birkhoff_t_interval(const norm_ast& n, vec_view u, vec_view v) {
  detail::check_pair(n, u, v);
  if (is_zero(u)) throw zero_vector_error("Birkhoff interval needs u != 0");
  const double nu = eval_norm(n, u);
  const rho_pair p = rho_both(n, u, v);
  return {-p.plus / (nu * nu), -p.minus / (nu * nu)};
}

struct orthogonalized {
  double s = 0.0;
  /// w = s u + v, rho_{alpha,beta}-orthogonal to u.
  vec w;
};

/// Shifts v along u so the result is rho_{alpha,beta}-orthogonal to u:
/// s = -rho_ab(u, v) / ((alpha + beta) ||u||^2).
inline orthogonalized ab_orthogonalizer(const norm_ast& n, vec_view u, vec_view v, alpha_beta ab) {
  detail::check_pair(n, u, v);
  if (is_zero(u)) throw zero_vector_error("orthogonalizer needs u != 0");
  const double nu = eval_norm(n, u);
  const double s = -rho_ab(n, u, v, ab) / (ab.total() * nu * nu);
  return {s, axpy(s, u, v)};
}

struct locus_row {
  double theta = 0.0;
  vec x;
  double residual = 0.0;
  bool is_zero_crossing = false;
};

/// Euclidean-angle parametrization of the unit circle of a planar norm.
inline vec unit_direction(const norm_ast& n, double theta) {
  return normalize(n, vec{std::cos(theta), std::sin(theta)});
}

/// Samples the residual of `rel` between u and the unit circle of `n` at
/// `resolution` equally spaced Euclidean angles and adds one row per zero:
/// sign changes refined by bisection to |dtheta| < 1e-10, and entries into
/// runs of samples with |residual| <= tol. Rows are ordered by theta.
inline std::vector<locus_row> ortho_locus(const norm_ast& n, vec_view u, const relation& rel, std::size_t resolution,
                                          double tol = 1e-9, unsigned threads = 1) {
  if (n.dim() != 2) throw dimension_error("locus tracing needs a 2-dimensional norm");
  require_dim(2, u, "u");
  if (is_zero(u)) throw zero_vector_error("locus needs u != 0");
  if (resolution < 8) throw domain_error("locus resolution must be >= 8");

  const double two_pi = 2.0 * std::numbers::pi;
  auto row_at = [&](double theta) {
    locus_row r;
    r.theta = theta;
    r.x = unit_direction(n, theta);
    r.residual = is_orthogonal(rel, n, u, r.x, tol).residual;
    return r;
  };
  std::vector<locus_row> samples = parallel_map(resolution, threads, [&](std::size_t k) {
    return row_at(two_pi * static_cast<double>(k) / static_cast<double>(resolution));
  });

  std::vector<locus_row> out;
  out.reserve(samples.size() + 8);
  for (std::size_t k = 0; k < resolution; ++k) {
    const locus_row& cur = samples[k];
    const locus_row& prev = samples[(k + resolution - 1) % resolution];
    const bool cur_zero = std::abs(cur.residual) <= tol;
    const bool prev_zero = std::abs(prev.residual) <= tol;
    locus_row s = cur;
    s.is_zero_crossing = cur_zero && !prev_zero;
    out.push_back(std::move(s));

    const locus_row& next = samples[(k + 1) % resolution];
    if (cur_zero || std::abs(next.residual) <= tol || (cur.residual > 0) == (next.residual > 0)) continue;
    double a = cur.theta;
    double b = k + 1 == resolution ? two_pi : next.theta;
    const bool a_positive = cur.residual > 0;
    while (b - a >= 1e-10) {
      const double mid = (a + b) / 2;
      const double r = is_orthogonal(rel, n, u, unit_direction(n, mid), tol).residual;
      if (r == 0.0) {
        a = b = mid;
        break;
      }
      ((r > 0) == a_positive ? a : b) = mid;
    }
    locus_row z = row_at((a + b) / 2);
    z.is_zero_crossing = true;
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace normderiv

#endif
