#ifndef NORMDERIV_NORM_HPP
#define NORMDERIV_NORM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "error.hpp"
#include "random.hpp"
#include "vector.hpp"

namespace normderiv {

namespace detail {

inline double eval_unchecked(const norm_ast& n, vec_view u) {
  switch (n.kind()) {
    case norm_kind::l1: {
      double s = 0.0;
      for (double x : u) s += std::abs(x);
      return s;
    }
    case norm_kind::linf: {
      double m = 0.0;
      for (double x : u) m = std::max(m, std::abs(x));
      return m;
    }
    case norm_kind::l2:
    case norm_kind::lp: {
      const double p = n.kind() == norm_kind::l2 ? 2.0 : n.param();
      double m = 0.0;
      for (double x : u) m = std::max(m, std::abs(x));
      if (m == 0.0) return 0.0;
      double s = 0.0;
      if (p == 2.0) {
        for (double x : u) s += (x / m) * (x / m);
        return m * std::sqrt(s);
      }
      for (double x : u) s += std::pow(std::abs(x) / m, p);
      return m * std::pow(s, 1.0 / p);
    }
    case norm_kind::wlp: {
      const double p = n.param();
      const auto& w = n.weights();
      if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, w[i] * std::abs(u[i]));
        return m;
      }
      if (p == 1.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::abs(u[i]);
        return s;
      }
      // (sum w_i |u_i|^p)^(1/p) == m * (sum (w_i^(1/p) |u_i| / m)^p)^(1/p)
      double m = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::pow(w[i], 1.0 / p) * std::abs(u[i]));
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::pow(std::abs(u[i]) / m, p);
      return m * std::pow(s, 1.0 / p);
    }
    case norm_kind::max: return std::max(eval_unchecked(n.left(), u), eval_unchecked(n.right(), u));
    case norm_kind::sum: return eval_unchecked(n.left(), u) + eval_unchecked(n.right(), u);
    case norm_kind::scale: return n.param() * eval_unchecked(n.inner(), u);
  }
  return 0.0;
}

}  // namespace detail

/// ||u|| under `n`.
inline double eval_norm(const norm_ast& n, vec_view u) {
  require_dim(n.dim(), u, "vector");
  return detail::eval_unchecked(n, u);
}

struct sample_config {
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  /// Coordinates are drawn from [-scale, scale].
  double scale = 1.0;
};

/// Random vector with every coordinate nonzero and uniform in [-scale, scale].
inline vec random_vector(splitmix64& rng, std::size_t dim, double scale) {
  vec x(dim);
  for (double& e : x) {
    do e = rng.uniform(-scale, scale);
    while (e == 0.0);
  }
  return x;
}

/// Rescales `x` (nonzero) onto the unit sphere of `n`.
inline vec normalize(const norm_ast& n, vec_view x) {
  const double r = eval_norm(n, x);
  if (r == 0.0) throw zero_vector_error("cannot normalize the zero vector");
  vec y = scaled(1.0 / r, x);
  // One correction step absorbs the rounding of the first division.
  const double r2 = detail::eval_unchecked(n, y);
  if (r2 != 1.0) y = scaled(1.0 / r2, y);
  return y;
}

/// `cfg.count` deterministic points on the unit sphere of `n`, obtained by
/// radially projecting uniform draws from the cube [-scale, scale]^n.
inline std::vector<vec> sphere_sample(const norm_ast& n, const sample_config& cfg) {
  splitmix64 rng(cfg.seed);
  std::vector<vec> out;
  out.reserve(cfg.count);
  for (std::size_t k = 0; k < cfg.count; ++k) out.push_back(normalize(n, random_vector(rng, n.dim(), cfg.scale)));
  return out;
}

enum class axiom { homogeneity, triangle, positivity };

inline const char* to_string(axiom a) {
  switch (a) {
    case axiom::homogeneity: return "homogeneity";
    case axiom::triangle: return "triangle";
    case axiom::positivity: return "positivity";
  }
  return "";
}

struct axiom_violation {
  axiom kind;
  vec u, v;
  double t = 0.0;
  /// Amount by which the axiom is broken beyond tolerance.
  double excess = 0.0;
};

struct audit_report {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t positivity_checks = 0;
  std::size_t zero_vectors_skipped = 0;
  std::optional<axiom_violation> worst;
};

/// Checks the three norm axioms on one (u, v, t) triple and folds the
/// outcome into `report`. Positivity is not checked when u = 0.
inline void audit_instance(const norm_ast& n, vec_view u, vec_view v, double t, double tol, audit_report& report) {
  require_dim(n.dim(), u, "u");
  require_dim(n.dim(), v, "v");
  ++report.samples;
  auto record = [&](axiom kind, double excess) {
    ++report.violations;
    if (!report.worst || excess > report.worst->excess)
      report.worst = axiom_violation{kind, vec(u.begin(), u.end()), vec(v.begin(), v.end()), t, excess};
  };
  const double nu = eval_norm(n, u);
  const double nv = eval_norm(n, v);

  const double homog = std::abs(eval_norm(n, scaled(t, u)) - std::abs(t) * nu) - tol * nu;
  if (homog > 0.0) record(axiom::homogeneity, homog);

  const double tri = eval_norm(n, axpy(1.0, u, v)) - nu - nv - tol;
  if (tri > 0.0) record(axiom::triangle, tri);

  if (is_zero(u)) {
    ++report.zero_vectors_skipped;
  } else {
    ++report.positivity_checks;
    if (!(nu > 0.0)) record(axiom::positivity, 1.0);
  }
}

/// Samples `cfg.count` random triples (u, v, t), t in [-10, 10], and checks
/// the norm axioms within `tol`. A correct norm_ast reports zero violations.
inline audit_report audit_norm(const norm_ast& n, const sample_config& cfg, double tol = 1e-10) {
  splitmix64 rng(cfg.seed);
  audit_report report;
  for (std::size_t k = 0; k < cfg.count; ++k) {
    vec u = random_vector(rng, n.dim(), cfg.scale);
    vec v = random_vector(rng, n.dim(), cfg.scale);
    const double t = rng.uniform(-10.0, 10.0);
    audit_instance(n, u, v, t, tol, report);
  }
  return report;
}

}  // namespace normderiv

#endif
