#ifndef NORMDERIV_GEOMETRY_HPP
#define NORMDERIV_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "derivatives.hpp"
#include "error.hpp"
#include "norm.hpp"
#include "random.hpp"
#include "vector.hpp"

namespace normderiv {

struct angle_result {
  double theta = 0.0;
  /// rho_ab(u,v) / ((alpha+beta) ||u|| ||v||) before clamping to [-1, 1].
  double cosine_argument = 0.0;
};

/// The rho_{alpha,beta}-angle arccos(rho_ab(u,v) / ((alpha+beta) ||u|| ||v||)).
/// Arguments within 1e-9 outside [-1, 1] are clamped; anything further out
/// raises `error`.
inline angle_result angle_ab(const norm_ast& n, vec_view u, vec_view v, alpha_beta ab) {
  detail::check_pair(n, u, v);
  if (is_zero(u) || is_zero(v)) throw zero_vector_error("angle needs nonzero u and v");
  const double c = rho_ab(n, u, v, ab) / (ab.total() * eval_norm(n, u) * eval_norm(n, v));
  if (!(std::abs(c) <= 1.0 + 1e-9)) throw error("cosine argument " + format_number(c) + " outside [-1, 1]");
  return {std::acos(std::clamp(c, -1.0, 1.0)), c};
}

/// |theta_ab(a u, b v) - theta_ab(u, v)| for ab > 0 and
/// |theta_ab(a u, b v) - (pi - theta_ba(u, v))| for ab < 0.
inline double angle_homogeneity_check(const norm_ast& n, vec_view u, vec_view v, double a, double b,
                                      alpha_beta ab) {
  if (a == 0.0 || b == 0.0) throw zero_vector_error("scaling factors must be nonzero");
  const double scaled_theta = angle_ab(n, scaled(a, u), scaled(b, v), ab).theta;
  if (a * b > 0) return std::abs(scaled_theta - angle_ab(n, u, v, ab).theta);
  return std::abs(scaled_theta - (std::numbers::pi - angle_ab(n, u, v, ab.swapped()).theta));
}

using diagnostics = std::vector<std::pair<std::string, double>>;

struct probe_witness {
  vec u, v;
  diagnostics values;
};

enum class probe_verdict { pass, witness_found };

inline const char* to_string(probe_verdict v) noexcept { return v == probe_verdict::pass ? "pass" : "witness-found"; }

struct probe_sample {
  vec u, v;
  double metric = 0.0;
  bool corner = false;
};

/// `witness` is the worst sampled pair and is present iff verdict is
/// witness_found. `trace` is filled only when requested.
struct probe_report {
  probe_verdict verdict = probe_verdict::pass;
  std::optional<probe_witness> witness;
  std::size_t samples_used = 0;
  std::uint64_t seed = 0;
  double worst_metric = 0.0;
  std::vector<probe_sample> trace;
};

/// Deterministic probe vectors where pathologies of polyhedral norms live:
/// every nonzero vector with entries in {-1, 0, 1} (capped families above
/// four dimensions), plus weight-balanced ties s_i / w_i for each weighted
/// leaf of `n`.
inline std::vector<vec> corner_vectors(const norm_ast& n) {
  const std::size_t dim = n.dim();
  std::set<vec> seen;
  std::vector<vec> out;
  auto add = [&](vec x) {
    if (!is_zero(x) && seen.insert(x).second) out.push_back(std::move(x));
  };
  if (dim <= 4) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      vec x(dim);
      std::size_t c = code;
      for (std::size_t i = 0; i < dim; ++i, c /= 3) x[i] = static_cast<double>(c % 3) - 1.0;
      add(std::move(x));
    }
  } else {
    for (std::size_t i = 0; i < dim; ++i) {
      vec e(dim, 0.0);
      e[i] = 1.0;
      add(e);
      e[i] = -1.0;
      add(e);
      vec ones(dim, 1.0);
      ones[i] = 0.0;
      add(ones);
    }
    vec ones(dim, 1.0), alt(dim, 1.0);
    for (std::size_t i = 1; i < dim; i += 2) alt[i] = -1.0;
    add(ones);
    add(alt);
  }
  std::vector<std::vector<double>> weight_sets;
  auto collect = [&](auto&& self, const norm_ast& node) -> void {
    if (node.kind() == norm_kind::wlp) weight_sets.push_back(node.weights());
    for (const auto& c : node.children()) self(self, c);
  };
  collect(collect, n);
  const std::size_t base = out.size();
  for (const auto& w : weight_sets)
    for (std::size_t k = 0; k < base; ++k) {
      vec x = out[k];
      for (std::size_t i = 0; i < dim; ++i) x[i] /= w[i];
      add(std::move(x));
    }
  return out;
}

/// (rho_+ - rho_-) / (||u|| ||v||); zero for u = 0 or v = 0.
inline double smoothness_gap(const norm_ast& n, vec_view u, vec_view v) {
  const double scale = eval_norm(n, u) * eval_norm(n, v);
  if (scale == 0.0) return 0.0;
  return rho_both(n, u, v).gap() / scale;
}

namespace detail {

// Folds one probe observation into `report`, keeping the largest metric.
inline void observe(probe_report& report, vec_view u, vec_view v, double metric, bool corner, bool trace,
                    diagnostics values) {
  ++report.samples_used;
  if (trace) report.trace.push_back({vec(u.begin(), u.end()), vec(v.begin(), v.end()), metric, corner});
  if (report.samples_used == 1 || metric > report.worst_metric) {
    report.worst_metric = metric;
    report.witness = probe_witness{vec(u.begin(), u.end()), vec(v.begin(), v.end()), std::move(values)};
  }
}

inline void settle(probe_report& report, bool found) {
  report.verdict = found ? probe_verdict::witness_found : probe_verdict::pass;
  if (!found) report.witness.reset();
}

}  // namespace detail

/// Looks for a pair with rho_+(u,v) - rho_-(u,v) > 1e-7 ||u|| ||v||, i.e. a
/// point where the norm is not smooth. Corner probes come first, then
/// `cfg.count` random pairs.
inline probe_report smoothness_probe(const norm_ast& n, const sample_config& cfg, bool trace = false) {
  constexpr double threshold = 1e-7;
  probe_report report;
  report.seed = cfg.seed;
  auto check = [&](vec_view u, vec_view v, bool corner) {
    const rho_pair p = rho_both(n, u, v);
    const double g = smoothness_gap(n, u, v);
    detail::observe(report, u, v, g, corner, trace,
                    {{"rho_minus", p.minus}, {"rho_plus", p.plus}, {"gap", p.gap()}, {"relative_gap", g}});
  };
  const std::vector<vec> corners = corner_vectors(n);
  for (const vec& u : corners)
    for (const vec& v : corners) check(u, v, true);
  splitmix64 rng(cfg.seed);
  for (std::size_t k = 0; k < cfg.count; ++k) {
    vec u = random_vector(rng, n.dim(), cfg.scale);
    vec v = random_vector(rng, n.dim(), cfg.scale);
    check(u, v, false);
  }
  detail::settle(report, report.worst_metric > threshold);
  return report;
}

/// Looks for distinct unit vectors u, v whose midpoint has norm >= 1 - 1e-9,
/// i.e. a segment on the unit sphere. Corner (flat-face) probes come first,
/// then `cfg.count` random pairs of sphere points.
inline probe_report strict_convexity_probe(const norm_ast& n, const sample_config& cfg, bool trace = false) {
  constexpr double threshold = 1.0 - 1e-9;
  probe_report report;
  report.seed = cfg.seed;
  auto check = [&](vec_view u, vec_view v, bool corner) {
    vec diff = axpy(-1.0, v, u);
    if (std::sqrt(dot(diff, diff)) < 1e-3) return;
    const double mid = eval_norm(n, scaled(0.5, axpy(1.0, u, v)));
    detail::observe(report, u, v, mid, corner, trace, {{"midpoint_norm", mid}});
  };
  std::vector<vec> corners;
  for (const vec& c : corner_vectors(n)) corners.push_back(normalize(n, c));
  for (std::size_t i = 0; i < corners.size(); ++i)
    for (std::size_t j = i + 1; j < corners.size(); ++j) check(corners[i], corners[j], true);
  const std::vector<vec> pts = sphere_sample(n, {cfg.seed, 2 * cfg.count, cfg.scale});
  for (std::size_t k = 0; k < cfg.count; ++k) check(pts[2 * k], pts[2 * k + 1], false);
  detail::settle(report, report.worst_metric >= threshold);
  return report;
}

/// (alpha+beta)(||u+v||^4 - ||u-v||^4) - 8(||u||^2 rho_ab(u,v) + ||v||^2 rho_ab(v,u)).
/// Vanishes identically exactly when the norm comes from an inner product.
inline double quartic_identity_residual(const norm_ast& n, vec_view u, vec_view v, alpha_beta ab) {
  detail::check_pair(n, u, v);
  const double s = eval_norm(n, axpy(1.0, v, u));
  const double d = eval_norm(n, axpy(-1.0, v, u));
  const double nu = eval_norm(n, u);
  const double nv = eval_norm(n, v);
  const double lhs = ab.total() * ((s * s) * (s * s) - (d * d) * (d * d));
  const double rhs = 8.0 * (nu * nu * rho_ab(n, u, v, ab) + nv * nv * rho_ab(n, v, u, ab));
  return lhs - rhs;
}

/// rho_ab(u,v) - rho_ab(v,u).
inline double symmetry_residual(const norm_ast& n, vec_view u, vec_view v, alpha_beta ab) {
  return rho_ab(n, u, v, ab) - rho_ab(n, v, u, ab);
}

/// Worst sampled asymmetry |rho_ab(u,v) - rho_ab(v,u)| / (||u|| ||v||) over
/// corner probes and `cfg.count` random pairs; a witness is reported when it
/// exceeds 1e-9.
inline probe_report symmetry_search(const norm_ast& n, alpha_beta ab, const sample_config& cfg, bool trace = false) {
  constexpr double threshold = 1e-9;
  probe_report report;
  report.seed = cfg.seed;
  auto check = [&](vec_view u, vec_view v, bool corner) {
    const double r = symmetry_residual(n, u, v, ab);
    const double rel = std::abs(r) / (eval_norm(n, u) * eval_norm(n, v));
    detail::observe(report, u, v, rel, corner, trace, {{"residual", r}, {"relative_residual", rel}});
  };
  const std::vector<vec> corners = corner_vectors(n);
  for (const vec& u : corners)
    for (const vec& v : corners) check(u, v, true);
  splitmix64 rng(cfg.seed);
  for (std::size_t k = 0; k < cfg.count; ++k) {
    vec u = random_vector(rng, n.dim(), cfg.scale);
    vec v = random_vector(rng, n.dim(), cfg.scale);
    check(u, v, false);
  }
  detail::settle(report, report.worst_metric > threshold);
  return report;
}

/// Sampled lower estimate of a constant together with the pair attaining it.
struct constant_estimate {
  double value = 0.0;
  bool unbounded = false;
  std::optional<probe_witness> witness;
  std::size_t samples_used = 0;
  std::size_t skipped = 0;
  std::uint64_t seed = 0;
};

/// Sampled estimate of the smallest K with
/// tan(theta_2(u,v)/2) <= K tan(theta_1(u,v)/2), where theta_i is the
/// rho_ab-angle under norm i. Pairs with both angles below 1e-9 are skipped;
/// theta_1 < 1e-9 with theta_2 >= 1e-6 marks the constant unbounded.
inline constant_estimate angular_constant(const norm_ast& n1, const norm_ast& n2, alpha_beta ab,
                                          const sample_config& cfg) {
  if (n1.dim() != n2.dim()) throw dimension_error("both norms must have the same dimension");
  constant_estimate est;
  est.seed = cfg.seed;
  splitmix64 rng(cfg.seed);
  for (std::size_t k = 0; k < cfg.count; ++k) {
    vec u = random_vector(rng, n1.dim(), cfg.scale);
    vec v = random_vector(rng, n1.dim(), cfg.scale);
    ++est.samples_used;
    const double t1 = angle_ab(n1, u, v, ab).theta;
    const double t2 = angle_ab(n2, u, v, ab).theta;
    auto keep = [&](double ratio) {
      est.value = ratio;
      est.witness = probe_witness{u, v, {{"theta_1", t1}, {"theta_2", t2}, {"ratio", ratio}}};
    };
    if (t1 < 1e-9) {
      if (t2 < 1e-9) {
        ++est.skipped;
      } else if (t2 >= 1e-6 && !est.unbounded) {
        est.unbounded = true;
        keep(std::numeric_limits<double>::infinity());
      }
      continue;
    }
    if (est.unbounded) continue;
    const double ratio = std::tan(t2 / 2) / std::tan(t1 / 2);
    if (!est.witness || ratio > est.value) keep(ratio);
  }
  return est;
}

/// Sampled estimate of the smallest k with
/// |rho_ab,1(u,v) - rho_ab,2(u,v)| <= k min(||u||_1 ||v||_1, ||u||_2 ||v||_2),
/// where ||.||_i is norm i. Pairs with denominator below 1e-12 are skipped.
inline constant_estimate norm_equiv_constant(const norm_ast& n1, const norm_ast& n2, alpha_beta ab,
                                             const sample_config& cfg) {
  if (n1.dim() != n2.dim()) throw dimension_error("both norms must have the same dimension");
  constant_estimate est;
  est.seed = cfg.seed;
  splitmix64 rng(cfg.seed);
  for (std::size_t k = 0; k < cfg.count; ++k) {
    vec u = random_vector(rng, n1.dim(), cfg.scale);
    vec v = random_vector(rng, n1.dim(), cfg.scale);
    ++est.samples_used;
    const double denom =
        std::min(eval_norm(n1, u) * eval_norm(n1, v), eval_norm(n2, u) * eval_norm(n2, v));
    if (denom < 1e-12) {
      ++est.skipped;
      continue;
    }
    const double r1 = rho_ab(n1, u, v, ab);
    const double r2 = rho_ab(n2, u, v, ab);
    const double ratio = std::abs(r1 - r2) / denom;
    if (!est.witness || ratio > est.value) {
      est.value = ratio;
      est.witness = probe_witness{u, v, {{"rho_ab_1", r1}, {"rho_ab_2", r2}, {"denominator", denom}, {"ratio", ratio}}};
    }
  }
  return est;
}

}  // namespace normderiv

#endif
