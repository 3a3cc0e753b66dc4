#ifndef NORMDERIV_EXPLORER_HPP
#define NORMDERIV_EXPLORER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ast.hpp"
#include "derivatives.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "golden.hpp"
#include "norm.hpp"
#include "orthogonality.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "vector.hpp"

namespace normderiv {

/// Dense row-major real matrix.
class matrix {
public:
  matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) throw dimension_error("matrix must be nonempty");
    if (data_.size() != rows * cols) throw dimension_error("matrix data does not match its shape");
    for (double x : data_)
      if (!std::isfinite(x)) throw domain_error("matrix entries must be finite");
  }

  static matrix identity(std::size_t n) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
    return {n, n, std::move(d)};
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  vec apply(vec_view x) const {
    require_dim(cols_, x, "matrix argument");
    vec y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += data_[i * cols_ + j] * x[j];
    return y;
  }

  matrix scaled_by(double c) const { return {rows_, cols_, scaled(c, data_)}; }

  bool is_zero() const noexcept { return normderiv::is_zero(data_); }

private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

/// Parses "a,b;c,d": rows separated by ';', entries by ','.
inline matrix parse_matrix(std::string_view text) {
  std::vector<double> data;
  std::size_t rows = 0, cols = 0, pos = 0;
  for (;;) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    vec row;
    try {
      row = parse_vector(text.substr(pos, end - pos));
    } catch (const syntax_error& e) {
      throw syntax_error("bad matrix row " + std::to_string(rows + 1), pos + e.offset());
    }
    if (rows == 0) cols = row.size();
    if (row.size() != cols) throw syntax_error("ragged matrix row " + std::to_string(rows + 1), pos);
    data.insert(data.end(), row.begin(), row.end());
    ++rows;
    if (end == text.size()) break;
    pos = end + 1;
  }
  return {rows, cols, std::move(data)};
}

/// T: (R^cols, domain) -> (R^rows, codomain).
struct linear_map {
  matrix t;
  norm_ast domain;
  norm_ast codomain;

  linear_map(matrix m, norm_ast dom, norm_ast cod) : t(std::move(m)), domain(std::move(dom)), codomain(std::move(cod)) {
    if (domain.dim() != t.cols() || codomain.dim() != t.rows())
      throw dimension_error("norm dimensions do not match the matrix shape");
  }

  vec operator()(vec_view x) const { return t.apply(x); }
};

enum class opnorm_method { grid_golden, multistart };

inline const char* to_string(opnorm_method m) noexcept {
  return m == opnorm_method::grid_golden ? "grid+golden" : "multistart";
}

/// A lower estimate of ||T|| = sup ||T x|| over the domain unit sphere,
/// attained at `direction`.
struct operator_norm_estimate {
  double value = 0.0;
  vec direction;
  opnorm_method method = opnorm_method::grid_golden;
  std::size_t evaluations = 0;
  /// Angular grid size (2-D) or number of starts (higher dimensions).
  std::size_t grid_points = 0;
};

/// Estimates ||T||. Planar domains: 1024-point angular grid on the unit
/// circle, refined by golden-section search around the best grid point.
/// Otherwise: hill climbing on the sphere from `cfg.count` seeded starts and
/// the coordinate axes. The result is always a lower bound.
inline operator_norm_estimate operator_norm(const linear_map& map, const sample_config& cfg) {
  if (map.t.is_zero()) throw zero_vector_error("operator norm of the zero map");
  operator_norm_estimate est;
  auto gain = [&](vec_view x) {
    ++est.evaluations;
    return eval_norm(map.codomain, map(x));
  };
  const norm_ast& dom = map.domain;
  if (dom.dim() == 2) {
    constexpr std::size_t grid = 1024;
    const double step = 2.0 * std::numbers::pi / grid;
    est.method = opnorm_method::grid_golden;
    est.grid_points = grid;
    std::size_t best_k = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < grid; ++k) {
      const double g = gain(unit_direction(dom, step * static_cast<double>(k)));
      if (g > best) best = g, best_k = k;
    }
    const double center = step * static_cast<double>(best_k);
    const line_minimum m =
        golden_section_maximize([&](double th) { return gain(unit_direction(dom, th)); }, center - step, center + step, 80);
    const double theta = m.fx > best ? m.x : center;
    est.direction = unit_direction(dom, theta);
    est.value = std::max(best, m.fx);
    return est;
  }

  est.method = opnorm_method::multistart;
  std::vector<vec> starts = sphere_sample(dom, cfg);
  for (std::size_t i = 0; i < dom.dim(); ++i) {
    vec e(dom.dim(), 0.0);
    e[i] = 1.0;
    starts.push_back(normalize(dom, e));
  }
  est.grid_points = starts.size();
  est.value = -1.0;
  for (vec x : starts) {
    double fx = gain(x);
    for (double h = 0.25; h > 1e-10;) {
      bool improved = false;
      for (std::size_t i = 0; i < x.size() && !improved; ++i)
        for (double sgn : {1.0, -1.0}) {
          vec y = x;
          y[i] += sgn * h;
          if (is_zero(y)) continue;
          y = normalize(dom, y);
          const double fy = gain(y);
          if (fy > fx) {
            x = std::move(y);
            fx = fy;
            improved = true;
            break;
          }
        }
      if (!improved) h /= 2;
    }
    if (fx > est.value) est.value = fx, est.direction = x;
  }
  return est;
}

struct preserver_condition {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double tolerance = 0.0;
  std::optional<probe_witness> witness;
};

/// Evidence for the three equivalent conditions on a linear map T:
///   (i)   T preserves rho_ab-orthogonality,
///   (ii)  ||T u|| = ||T|| ||u|| for all u,
///   (iii) rho_ab(T u, T v) = ||T||^2 rho_ab(u, v) for all u, v.
struct preserver_report {
  operator_norm_estimate op_norm;
  preserver_condition preserves_orthogonality;
  preserver_condition isometry_multiple;
  preserver_condition rho_scaling;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
};

/// Measures (i) max |rho_ab(Tu, Tw)| / (||Tu|| ||Tw||) over rho_ab-orthogonal
/// pairs (u, w) built by ab_orthogonalizer, (ii) max | ||Tx|| - ||T|| | / ||T||
/// over unit x, (iii) max |rho_ab(Tu,Tv) - ||T||^2 rho_ab(u,v)| /
/// (||T||^2 ||u|| ||v||). Each passes at 1e-6, or 1e-5 when ||T|| comes from
/// the multistart search.
inline preserver_report preserver_check(const linear_map& map, alpha_beta ab, const sample_config& cfg) {
  preserver_report rep;
  rep.seed = cfg.seed;
  rep.samples = cfg.count;
  rep.op_norm = operator_norm(map, cfg);
  const double tol = rep.op_norm.method == opnorm_method::grid_golden ? 1e-6 : 1e-5;
  const double op = rep.op_norm.value;
  const norm_ast& dom = map.domain;
  const norm_ast& cod = map.codomain;

  auto fold = [](preserver_condition& c, double value, vec_view u, vec_view v, diagnostics d) {
    if (!c.witness || value > c.worst) {
      c.worst = value;
      c.witness = probe_witness{vec(u.begin(), u.end()), vec(v.begin(), v.end()), std::move(d)};
    }
  };

  preserver_condition& c1 = rep.preserves_orthogonality;
  preserver_condition& c2 = rep.isometry_multiple;
  preserver_condition& c3 = rep.rho_scaling;
  c1.name = "preserves_orthogonality";
  c2.name = "isometry_multiple";
  c3.name = "rho_scaling";
  c1.tolerance = c2.tolerance = c3.tolerance = tol;

  splitmix64 rng = splitmix64::stream(cfg.seed, 1);
  for (std::size_t k = 0; k < cfg.count; ++k) {
    const vec u = random_vector(rng, dom.dim(), cfg.scale);
    const vec v = random_vector(rng, dom.dim(), cfg.scale);
    const vec w = ab_orthogonalizer(dom, u, v, ab).w;
    if (is_zero(w)) continue;
    const vec tu = map(u), tw = map(w);
    const double denom = eval_norm(cod, tu) * eval_norm(cod, tw);
    const double r = rho_ab(cod, tu, tw, ab);
    fold(c1, denom == 0.0 ? 0.0 : std::abs(r) / denom, u, w,
         {{"rho_ab_domain", rho_ab(dom, u, w, ab)}, {"rho_ab_image", r}});
  }

  const std::vector<vec> xs = sphere_sample(dom, {splitmix64::stream(cfg.seed, 2)(), cfg.count, cfg.scale});
  for (const vec& x : xs) {
    const double g = eval_norm(cod, map(x));
    fold(c2, std::abs(g - op) / op, x, map(x), {{"image_norm", g}, {"operator_norm", op}});
  }
  // Corner directions expose kernels of singular maps that random samples miss.
  for (const vec& x : corner_vectors(dom)) {
    const vec ux = normalize(dom, x);
    const double g = eval_norm(cod, map(ux));
    fold(c2, std::abs(g - op) / op, ux, map(ux), {{"image_norm", g}, {"operator_norm", op}});
  }

  splitmix64 rng3 = splitmix64::stream(cfg.seed, 3);
  for (std::size_t k = 0; k < cfg.count; ++k) {
    const vec u = random_vector(rng3, dom.dim(), cfg.scale);
    const vec v = random_vector(rng3, dom.dim(), cfg.scale);
    const double lhs = rho_ab(cod, map(u), map(v), ab);
    const double rhs = op * op * rho_ab(dom, u, v, ab);
    const double rel = std::abs(lhs - rhs) / (op * op * eval_norm(dom, u) * eval_norm(dom, v));
    fold(c3, rel, u, v, {{"rho_ab_image", lhs}, {"scaled_rho_ab", rhs}});
  }

  for (preserver_condition* c : {&c1, &c2, &c3}) c->pass = c->worst <= c->tolerance;
  return rep;
}

struct incomparability_witness {
  vec u, v;
  double residual_a = 0.0;
  double residual_b = 0.0;
  /// Position of u in the search order (corner probes first).
  std::size_t base_index = 0;
};

/// witness_ab: rel_a holds and rel_b fails; witness_ba: the reverse.
struct incomparability_report {
  relation relation_a;
  relation relation_b;
  std::optional<incomparability_witness> witness_ab;
  std::optional<incomparability_witness> witness_ba;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::size_t bases_searched = 0;
  std::size_t candidates_checked = 0;
  std::size_t discarded = 0;
  double tolerance = 0.0;
  double fail_margin = 0.0;
};

struct mining_options {
  std::size_t resolution = 180;
  double tol = 1e-9;
  /// A candidate only counts when the other relation's |residual| exceeds this.
  double fail_margin = 1e-7;
  unsigned threads = 1;
};

/// Searches a planar normed space for pairs that separate two orthogonality
/// relations. For each base vector u (corner probes, then seeded sphere
/// samples, `cfg.count` in total) the zero set of one relation on the unit
/// circle is traced with ortho_locus and the other relation is tested there.
/// Every reported witness has been re-checked with is_orthogonal; candidates
/// that do not survive are counted in `discarded`.
inline incomparability_report mine_incomparability(const norm_ast& n, const relation& rel_a, const relation& rel_b,
                                                   const sample_config& cfg, const mining_options& opt = {}) {
  if (n.dim() != 2) throw dimension_error("incomparability mining needs a 2-dimensional norm");
  incomparability_report rep{rel_a, rel_b, std::nullopt, std::nullopt};
  rep.seed = cfg.seed;
  rep.budget = cfg.count;
  rep.tolerance = opt.tol;
  rep.fail_margin = opt.fail_margin;

  std::vector<vec> bases;
  for (const vec& c : corner_vectors(n)) {
    if (bases.size() == cfg.count) break;
    bases.push_back(normalize(n, c));
  }
  if (bases.size() < cfg.count) {
    std::vector<vec> more = sphere_sample(n, {cfg.seed, cfg.count - bases.size(), cfg.scale});
    bases.insert(bases.end(), more.begin(), more.end());
  }

  struct base_result {
    std::optional<incomparability_witness> ab, ba;
    std::size_t checked = 0, discarded = 0;
  };

  // Zeros of `holds` on the unit circle around u where `fails` does not hold.
  auto search = [&](const vec& u, const relation& holds, const relation& fails, std::size_t idx,
                    base_result& out) -> std::optional<incomparability_witness> {
    std::vector<locus_row> rows;
    try {
      rows = ortho_locus(n, u, holds, opt.resolution, opt.tol);
    } catch (const nonsmooth_error&) {
      return std::nullopt;
    }
    for (const locus_row& row : rows) {
      if (!row.is_zero_crossing) continue;
      ++out.checked;
      try {
        const ortho_verdict a = is_orthogonal(holds, n, u, row.x, opt.tol);
        const ortho_verdict b = is_orthogonal(fails, n, u, row.x, opt.tol);
        if (b.holds) continue;
        if (!a.holds || std::abs(b.residual) <= opt.fail_margin) {
          ++out.discarded;
          continue;
        }
        return incomparability_witness{u, row.x, a.residual, b.residual, idx};
      } catch (const nonsmooth_error&) {
        ++out.discarded;
      }
    }
    return std::nullopt;
  };

  constexpr std::size_t chunk = 64;
  for (std::size_t start = 0; start < bases.size(); start += chunk) {
    const std::size_t len = std::min(chunk, bases.size() - start);
    const bool need_ab = !rep.witness_ab, need_ba = !rep.witness_ba;
    std::vector<base_result> results = parallel_map(len, opt.threads, [&](std::size_t i) {
      base_result r;
      const vec& u = bases[start + i];
      if (need_ab) r.ab = search(u, rel_a, rel_b, start + i, r);
      if (need_ba) {
        if (auto w = search(u, rel_b, rel_a, start + i, r)) {
          // Report residuals in (a, b) order.
          std::swap(w->residual_a, w->residual_b);
          r.ba = std::move(w);
        }
      }
      return r;
    });
    for (base_result& r : results) {
      ++rep.bases_searched;
      rep.candidates_checked += r.checked;
      rep.discarded += r.discarded;
      if (!rep.witness_ab && r.ab) rep.witness_ab = std::move(r.ab);
      if (!rep.witness_ba && r.ba) rep.witness_ba = std::move(r.ba);
    }
    if (rep.witness_ab && rep.witness_ba) break;
  }
  return rep;
}

}  // namespace normderiv

#endif
