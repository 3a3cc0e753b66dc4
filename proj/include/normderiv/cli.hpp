#ifndef NORMDERIV_CLI_HPP
#define NORMDERIV_CLI_HPP

// Command-line front end. Needs CLI11 and nlohmann/json on the include path.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ast.hpp"
#include "derivatives.hpp"
#include "error.hpp"
#include "explorer.hpp"
#include "geometry.hpp"
#include "norm.hpp"
#include "orthogonality.hpp"
#include "parse.hpp"
#include "vector.hpp"

namespace normderiv::cli {

using json = nlohmann::ordered_json;

/// Thrown for malformed or missing flags; maps to exit code 2.
class usage_error : public error {
public:
  using error::error;
};

// ---------------------------------------------------------------------------
// Output

/// Numbers with 17 significant digits; non-finite numbers become null.
inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_json(std::ostream& os, const json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::number_float: os << format_double(j.get<double>()); return;
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      bool scalars = true;
      for (const auto& e : j) scalars = scalars && !e.is_structured();
      if (j.empty() || scalars) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    default: os << j.dump(); return;
  }
}

/// One-line rendering used for line-delimited record files.
inline std::string compact(const json& j) {
  switch (j.type()) {
    case json::value_t::number_float: return format_double(j.get<double>());
    case json::value_t::object: {
      std::string s = "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) s += ",";
        first = false;
        s += json(it.key()).dump() + ":" + compact(it.value());
      }
      return s + "}";
    }
    case json::value_t::array: {
      std::string s = "[";
      for (std::size_t i = 0; i < j.size(); ++i) s += (i ? "," : "") + compact(j[i]);
      return s + "]";
    }
    default: return j.dump();
  }
}

inline void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  if (j.is_array()) {
    bool scalars = true;
    for (const auto& e : j) scalars = scalars && !e.is_structured();
    if (scalars) {
      std::string s;
      for (std::size_t i = 0; i < j.size(); ++i) s += (i ? " " : "") + compact(j[i]);
      out.emplace_back(prefix, s);
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    return;
  }
  out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : compact(j));
}

inline void emit(std::ostream& os, const json& doc, const std::string& format) {
  if (format == "json") {
    write_json(os, doc);
    os << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  if (format == "csv") {
    os << "key,value\n";
    for (const auto& [k, v] : rows) {
      const bool quote = v.find_first_of(",\"\n") != std::string::npos;
      std::string cell = v;
      if (quote) {
        std::string q = "\"";
        for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        cell = q + "\"";
      }
      os << k << "," << cell << "\n";
    }
    return;
  }
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) os << k << std::string(width - k.size() + 2, ' ') << v << "\n";
}

inline json to_json(vec_view x) { return json(std::vector<double>(x.begin(), x.end())); }

inline json to_json(const deriv_result& r) {
  return {{"value", r.value}, {"method", to_string(r.method)}, {"enclosure_width", r.enclosure_width},
          {"converged", r.converged}};
}

inline json to_json(const ortho_verdict& v) {
  return {{"holds", v.holds}, {"residual", v.residual}, {"tolerance", v.tolerance}};
}

inline json to_json(const diagnostics& d) {
  json j = json::object();
  for (const auto& [k, v] : d) j[k] = v;
  return j;
}

inline json to_json(const std::optional<probe_witness>& w) {
  if (!w) return nullptr;
  return {{"u", to_json(w->u)}, {"v", to_json(w->v)}, {"diagnostics", to_json(w->values)}};
}

inline json to_json(const probe_report& r) {
  return {{"verdict", to_string(r.verdict)}, {"worst_metric", r.worst_metric}, {"samples_used", r.samples_used},
          {"seed", r.seed},         {"witness", to_json(r.witness)}};
}

inline json to_json(const constant_estimate& e) {
  return {{"estimate", e.value},     {"unbounded", e.unbounded}, {"lower_bound", true},
          {"samples_used", e.samples_used}, {"skipped", e.skipped}, {"seed", e.seed},
          {"witness", to_json(e.witness)}};
}

inline json to_json(const audit_report& r) {
  json worst = nullptr;
  if (r.worst)
    worst = {{"axiom", to_string(r.worst->kind)}, {"u", to_json(r.worst->u)}, {"v", to_json(r.worst->v)},
             {"t", r.worst->t}, {"excess", r.worst->excess}};
  return {{"samples", r.samples},
          {"violations", r.violations},
          {"positivity_checks", r.positivity_checks},
          {"zero_vectors_skipped", r.zero_vectors_skipped},
          {"worst", worst}};
}

inline json to_json(const locus_row& r) {
  return {{"theta", r.theta}, {"x", r.x[0]}, {"y", r.x[1]}, {"residual", r.residual},
          {"is_zero_crossing", r.is_zero_crossing}};
}

inline json to_json(const preserver_condition& c) {
  return {{"pass", c.pass}, {"worst", c.worst}, {"tolerance", c.tolerance}, {"witness", to_json(c.witness)}};
}

inline json to_json(const std::optional<incomparability_witness>& w) {
  if (!w) return nullptr;
  return {{"u", to_json(w->u)},
          {"v", to_json(w->v)},
          {"residual_a", w->residual_a},
          {"residual_b", w->residual_b},
          {"base_index", w->base_index}};
}

// ---------------------------------------------------------------------------
// Flags

struct options {
  std::string norm_text, norm2_text;
  std::optional<std::size_t> dim;
  std::string u_text, v_text, w_text;
  std::optional<double> alpha, beta, lambda;
  std::string relation_text, relation2_text;
  std::string matrix_text;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t resolution = 720;
  std::string out_path;
  std::string format = "json";
  unsigned threads = 1;
  std::string kind;
  std::optional<double> scale_a, scale_b;
};

inline std::string shell_quote(const std::string& s) {
  if (!s.empty() && s.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_.,=/+:") ==
                        std::string::npos)
    return s;
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

class context {
public:
  context(const options& o, std::vector<std::string> argv) : o_(o), argv_(std::move(argv)) {}

  const options& opt() const { return o_; }

  std::string replay() const {
    std::string s = "normderiv";
    for (const auto& a : argv_) s += " " + shell_quote(a);
    return s;
  }

  std::size_t dimension() const {
    if (o_.dim) return *o_.dim;
    if (!o_.u_text.empty()) return parse_vector(o_.u_text).size();
    return 2;
  }

  norm_ast norm(std::size_t dim) const {
    if (o_.norm_text.empty()) throw usage_error("--norm is required");
    return parse_norm(o_.norm_text, dim);
  }
  norm_ast norm() const { return norm(dimension()); }

  norm_ast norm2(std::size_t dim) const {
    if (o_.norm2_text.empty()) throw usage_error("--norm2 is required");
    return parse_norm(o_.norm2_text, dim);
  }

  vec vector(const std::string& text, const char* flag) const {
    if (text.empty()) throw usage_error(std::string(flag) + " is required");
    try {
      return parse_vector(text);
    } catch (const syntax_error& e) {
      throw usage_error(std::string(flag) + ": " + e.what());
    }
  }
  vec u() const { return vector(o_.u_text, "--u"); }
  vec v() const { return vector(o_.v_text, "--v"); }

  alpha_beta ab() const {
    if (!o_.alpha || !o_.beta) throw usage_error("--alpha and --beta are required");
    return {*o_.alpha, *o_.beta};
  }
  std::optional<alpha_beta> maybe_ab() const {
    if (!o_.alpha && !o_.beta) return std::nullopt;
    return ab();
  }
  std::optional<lambda_weight> maybe_lambda() const {
    if (!o_.lambda) return std::nullopt;
    return lambda_weight(*o_.lambda);
  }

  relation rel(const std::string& text, const char* flag) const {
    if (text.empty()) throw usage_error(std::string(flag) + " is required");
    return parse_relation(text, maybe_ab(), maybe_lambda());
  }

  double tol(double fallback = 1e-9) const {
    const double t = o_.tol.value_or(fallback);
    if (!(t > 0.0)) throw usage_error("--tol must be positive");
    return t;
  }

  sample_config samples() const {
    if (o_.samples == 0) throw usage_error("--samples must be positive");
    return {o_.seed, o_.samples, 1.0};
  }

  json header(const char* command) const { return {{"command", command}, {"replay", replay()}}; }

  /// Writes line-delimited records to --out. Returns false when --out is absent.
  template <typename Rows>
  bool stream_rows(const Rows& rows) const {
    if (o_.out_path.empty()) return false;
    std::ofstream f(o_.out_path);
    if (!f) throw error("cannot open output file " + o_.out_path);
    for (const auto& r : rows) f << compact(r) << "\n";
    return true;
  }

private:
  const options& o_;
  std::vector<std::string> argv_;
};

// ---------------------------------------------------------------------------
// Subcommands

inline json cmd_rho(const context& c) {
  const norm_ast n = c.norm();
  const vec u = c.u(), v = c.v();
  auto block = [&](const vec& x, const vec& y) {
    const rho_pair p = rho_both(n, x, y);
    json j = {{"norm_u", eval_norm(n, x)}, {"norm_v", eval_norm(n, y)}, {"rho_minus", p.minus},
              {"rho_plus", p.plus},       {"rho", (p.minus + p.plus) / 2}};
    if (auto l = c.maybe_lambda()) j["rho_lambda"] = rho_lambda(n, x, y, *l);
    if (auto ab = c.maybe_ab()) j["rho_ab"] = rho_ab(n, x, y, *ab);
    const double t = c.tol();
    j["numeric"] = {{"minus", to_json(rho_pm_numeric(n, x, y, side::minus, t))},
                    {"plus", to_json(rho_pm_numeric(n, x, y, side::plus, t))}};
    return j;
  };
  json doc = c.header("rho");
  doc["norm"] = print_norm(n);
  doc["dim"] = n.dim();
  if (auto ab = c.maybe_ab()) doc["alpha_beta"] = {ab->alpha(), ab->beta()};
  if (auto l = c.maybe_lambda()) doc["lambda"] = l->value();
  doc["u"] = to_json(u);
  doc["v"] = to_json(v);
  doc.update(block(u, v));
  if (!c.opt().w_text.empty()) {
    const vec w = c.vector(c.opt().w_text, "--w");
    json jw = block(u, w);
    jw["w"] = to_json(w);
    doc["u_w"] = jw;
  }
  return doc;
}

inline json cmd_ortho(const context& c) {
  const norm_ast n = c.norm();
  const vec u = c.u(), v = c.v();
  const relation rel = c.rel(c.opt().relation_text, "--relation");
  const double t = c.tol();
  json doc = c.header("ortho");
  doc["norm"] = print_norm(n);
  doc["relation"] = to_string(rel);
  doc["u"] = to_json(u);
  doc["v"] = to_json(v);
  doc.update(to_json(is_orthogonal(rel, n, u, v, t)));
  if (rel.tag() == relation_tag::birkhoff && !is_zero(u) && !is_zero(v))
    doc["oracle"] = to_json(birkhoff_oracle(n, u, v, t));
  return doc;
}

inline json cmd_solve(const context& c) {
  const norm_ast n = c.norm();
  const vec u = c.u(), v = c.v();
  const alpha_beta ab = c.ab();
  const orthogonalized sol = ab_orthogonalizer(n, u, v, ab);
  const ortho_verdict check = is_orthogonal(relation::rho_ab(ab), n, u, sol.w, c.tol());
  json doc = c.header("solve");
  doc["norm"] = print_norm(n);
  doc["alpha_beta"] = {ab.alpha(), ab.beta()};
  doc["u"] = to_json(u);
  doc["v"] = to_json(v);
  doc["s"] = sol.s;
  doc["w"] = to_json(sol.w);
  doc["rho_ab_u_w"] = check.residual;
  doc["holds"] = check.holds;
  return doc;
}

inline json cmd_interval(const context& c) {
  const norm_ast n = c.norm();
  const vec u = c.u(), v = c.v();
  const closed_interval iv = birkhoff_t_interval(n, u, v);
  const rho_pair p = rho_both(n, u, v);
  json doc = c.header("interval");
  doc["norm"] = print_norm(n);
  doc["u"] = to_json(u);
  doc["v"] = to_json(v);
  doc["lower"] = iv.lower;
  doc["upper"] = iv.upper;
  doc["rho_minus"] = p.minus;
  doc["rho_plus"] = p.plus;
  return doc;
}

inline json cmd_locus(const context& c) {
  const norm_ast n = c.norm();
  const vec u = c.u();
  const relation rel = c.rel(c.opt().relation_text, "--relation");
  const std::vector<locus_row> rows = ortho_locus(n, u, rel, c.opt().resolution, c.tol(), c.opt().threads);
  json records = json::array(), zeros = json::array();
  for (const auto& r : rows) {
    records.push_back(to_json(r));
    if (r.is_zero_crossing) zeros.push_back(to_json(r));
  }
  json doc = c.header("locus");
  doc["norm"] = print_norm(n);
  doc["relation"] = to_string(rel);
  doc["u"] = to_json(u);
  doc["resolution"] = c.opt().resolution;
  doc["rows"] = rows.size();
  doc["zeros"] = zeros;
  if (c.stream_rows(records))
    doc["out"] = c.opt().out_path;
  else
    doc["records"] = records;
  return doc;
}

inline json cmd_angle(const context& c) {
  const norm_ast n = c.norm();
  const vec u = c.u(), v = c.v();
  const alpha_beta ab = c.ab();
  const angle_result a = angle_ab(n, u, v, ab);
  json doc = c.header("angle");
  doc["norm"] = print_norm(n);
  doc["alpha_beta"] = {ab.alpha(), ab.beta()};
  doc["u"] = to_json(u);
  doc["v"] = to_json(v);
  doc["theta"] = a.theta;
  doc["degrees"] = a.theta * 180.0 / std::numbers::pi;
  doc["cosine_argument"] = a.cosine_argument;
  if (c.opt().scale_a || c.opt().scale_b) {
    const double sa = c.opt().scale_a.value_or(1.0), sb = c.opt().scale_b.value_or(1.0);
    doc["homogeneity"] = {{"a", sa}, {"b", sb}, {"residual", angle_homogeneity_check(n, u, v, sa, sb, ab)}};
  }
  return doc;
}

inline json cmd_probe(const context& c) {
  const norm_ast n = c.norm();
  const sample_config cfg = c.samples();
  const std::string& kind = c.opt().kind;
  const bool trace = !c.opt().out_path.empty();
  probe_report rep;
  json doc = c.header("probe");
  doc["norm"] = print_norm(n);
  doc["kind"] = kind;
  if (kind == "smoothness") {
    rep = smoothness_probe(n, cfg, trace);
  } else if (kind == "strict_convexity") {
    rep = strict_convexity_probe(n, cfg, trace);
  } else if (kind == "symmetry") {
    const alpha_beta ab = c.ab();
    doc["alpha_beta"] = {ab.alpha(), ab.beta()};
    rep = symmetry_search(n, ab, cfg, trace);
  } else {
    throw usage_error("--kind must be smoothness, strict_convexity or symmetry");
  }
  doc.update(to_json(rep));
  if (trace) {
    json records = json::array();
    for (const auto& s : rep.trace)
      records.push_back({{"u", to_json(s.u)}, {"v", to_json(s.v)}, {"metric", s.metric}, {"corner", s.corner}});
    c.stream_rows(records);
    doc["out"] = c.opt().out_path;
  }
  return doc;
}

inline json cmd_identity(const context& c) {
  const norm_ast n = c.norm();
  const vec u = c.u(), v = c.v();
  const alpha_beta ab = c.ab();
  json doc = c.header("identity");
  doc["norm"] = print_norm(n);
  doc["alpha_beta"] = {ab.alpha(), ab.beta()};
  doc["u"] = to_json(u);
  doc["v"] = to_json(v);
  doc["quartic_residual"] = quartic_identity_residual(n, u, v, ab);
  doc["symmetry_residual"] = symmetry_residual(n, u, v, ab);
  doc["rho_ab_uv"] = rho_ab(n, u, v, ab);
  doc["rho_ab_vu"] = rho_ab(n, v, u, ab);
  return doc;
}

inline json cmd_constant(const context& c) {
  const std::size_t dim = c.dimension();
  const norm_ast n1 = c.norm(dim), n2 = c.norm2(dim);
  const alpha_beta ab = c.ab();
  const sample_config cfg = c.samples();
  json doc = c.header("constant");
  doc["norm"] = print_norm(n1);
  doc["norm2"] = print_norm(n2);
  doc["kind"] = c.opt().kind;
  doc["alpha_beta"] = {ab.alpha(), ab.beta()};
  if (c.opt().kind == "angular")
    doc.update(to_json(angular_constant(n1, n2, ab, cfg)));
  else if (c.opt().kind == "equivalence")
    doc.update(to_json(norm_equiv_constant(n1, n2, ab, cfg)));
  else
    throw usage_error("--kind must be angular or equivalence");
  return doc;
}

inline json cmd_preserver(const context& c) {
  if (c.opt().matrix_text.empty()) throw usage_error("--matrix is required");
  matrix m = [&] {
    try {
      return parse_matrix(c.opt().matrix_text);
    } catch (const syntax_error& e) {
      throw usage_error(std::string("--matrix: ") + e.what());
    }
  }();
  if (c.opt().dim && *c.opt().dim != m.cols()) throw dimension_error("--dim does not match the matrix columns");
  const norm_ast dom = c.norm(m.cols());
  const norm_ast cod = c.opt().norm2_text.empty() ? c.norm(m.rows()) : c.norm2(m.rows());
  const alpha_beta ab = c.ab();
  const preserver_report rep = preserver_check(linear_map(m, dom, cod), ab, c.samples());
  json doc = c.header("preserver");
  doc["domain_norm"] = print_norm(dom);
  doc["codomain_norm"] = print_norm(cod);
  doc["alpha_beta"] = {ab.alpha(), ab.beta()};
  doc["operator_norm"] = {{"estimate", rep.op_norm.value},
                          {"lower_bound", true},
                          {"direction", to_json(rep.op_norm.direction)},
                          {"method", to_string(rep.op_norm.method)},
                          {"grid_points", rep.op_norm.grid_points}};
  doc["conditions"] = {{"preserves_orthogonality", to_json(rep.preserves_orthogonality)},
                       {"isometry_multiple", to_json(rep.isometry_multiple)},
                       {"rho_scaling", to_json(rep.rho_scaling)}};
  doc["all_pass"] = rep.preserves_orthogonality.pass && rep.isometry_multiple.pass && rep.rho_scaling.pass;
  doc["seed"] = rep.seed;
  doc["samples"] = rep.samples;
  return doc;
}

inline json cmd_mine(const context& c) {
  const norm_ast n = c.norm();
  const relation a = c.rel(c.opt().relation_text, "--relation");
  const relation b = c.rel(c.opt().relation2_text, "--relation2");
  mining_options mo;
  mo.resolution = c.opt().resolution;
  mo.tol = c.tol();
  mo.fail_margin = 100.0 * mo.tol;
  mo.threads = c.opt().threads;
  const incomparability_report rep = mine_incomparability(n, a, b, c.samples(), mo);
  json doc = c.header("mine");
  doc["norm"] = print_norm(n);
  doc["relation_a"] = to_string(rep.relation_a);
  doc["relation_b"] = to_string(rep.relation_b);
  doc["witness_ab"] = to_json(rep.witness_ab);
  doc["witness_ba"] = to_json(rep.witness_ba);
  doc["seed"] = rep.seed;
  doc["budget"] = rep.budget;
  doc["bases_searched"] = rep.bases_searched;
  doc["candidates_checked"] = rep.candidates_checked;
  doc["discarded"] = rep.discarded;
  doc["tolerance"] = rep.tolerance;
  doc["fail_margin"] = rep.fail_margin;
  doc["resolution"] = mo.resolution;
  return doc;
}

inline json cmd_audit(const context& c) {
  const norm_ast n = c.norm();
  const audit_report rep = audit_norm(n, c.samples(), c.tol(1e-10));
  json doc = c.header("audit");
  doc["norm"] = print_norm(n);
  doc["tolerance"] = c.tol(1e-10);
  doc.update(to_json(rep));
  return doc;
}

// ---------------------------------------------------------------------------
// Entry point

/// Runs one invocation. `args` excludes the program name. Exit codes:
/// 0 success, 1 domain error, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  options o;
  CLI::App app{"Norm derivatives, rho_{alpha,beta} orthogonality and related geometry in finite-dimensional normed spaces",
               "normderiv"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto common = [&](CLI::App* s) {
    s->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "table", "csv"}));
    s->add_option("--threads", o.threads, "Worker threads (output does not depend on it)")
        ->check(CLI::Range(1u, 256u));
  };
  auto norm_flags = [&](CLI::App* s) {
    s->add_option("--norm", o.norm_text, "Norm expression, e.g. 'max(scale(0.5, l1), l2)'");
    s->add_option("--dim", o.dim, "Ambient dimension (default: length of --u, else 2)");
  };
  auto uv = [&](CLI::App* s) {
    s->add_option("--u", o.u_text, "First vector, comma separated");
    s->add_option("--v", o.v_text, "Second vector, comma separated");
  };
  auto ab = [&](CLI::App* s) {
    s->add_option("--alpha", o.alpha, "alpha in [0,1)");
    s->add_option("--beta", o.beta, "beta in [0,1), 0 < alpha+beta < 1");
  };
  auto tol = [&](CLI::App* s) { s->add_option("--tol", o.tol, "Tolerance (default 1e-9)"); };
  auto sampling = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "Random seed (default 0)");
    s->add_option("--samples", o.samples, "Sample count or search budget (default 1000)");
  };
  auto relation_flag = [&](CLI::App* s) {
    s->add_option("--relation", o.relation_text,
                  "birkhoff|rho_plus|rho_minus|rho|rho_lambda[(l)]|rho_ab[(a,b)]|isosceles|pythagorean|semi");
    s->add_option("--lambda", o.lambda, "lambda in [0,1] for rho_lambda");
  };

  struct entry {
    CLI::App* app;
    json (*fn)(const context&);
  };
  std::vector<entry> cmds;

  CLI::App* s = app.add_subcommand("rho", "Norm derivatives rho_-, rho_+, rho, rho_lambda, rho_ab at (u, v)");
  common(s), norm_flags(s), uv(s), ab(s), tol(s);
  s->add_option("--w", o.w_text, "Optional third vector; also report the pair (u, w)");
  s->add_option("--lambda", o.lambda, "lambda in [0,1]");
  cmds.push_back({s, cmd_rho});

  s = app.add_subcommand("ortho", "Decide an orthogonality relation between u and v");
  common(s), norm_flags(s), uv(s), ab(s), tol(s), relation_flag(s);
  cmds.push_back({s, cmd_ortho});

  s = app.add_subcommand("solve", "Find s such that u is rho_ab-orthogonal to s u + v");
  common(s), norm_flags(s), uv(s), ab(s), tol(s);
  cmds.push_back({s, cmd_solve});

  s = app.add_subcommand("interval", "All t with u Birkhoff-orthogonal to t u + v");
  common(s), norm_flags(s), uv(s);
  cmds.push_back({s, cmd_interval});

  s = app.add_subcommand("locus", "Zero set of a relation around u on the unit circle (2-D)");
  common(s), norm_flags(s), ab(s), tol(s), relation_flag(s);
  s->add_option("--u", o.u_text, "Base vector, comma separated");
  s->add_option("--resolution", o.resolution, "Angular samples (default 720)");
  s->add_option("--out", o.out_path, "Write line-delimited locus records here");
  cmds.push_back({s, cmd_locus});

  s = app.add_subcommand("angle", "rho_ab-angle between u and v");
  common(s), norm_flags(s), uv(s), ab(s);
  s->add_option("--scale-a", o.scale_a, "Also check homogeneity under u -> a u");
  s->add_option("--scale-b", o.scale_b, "Also check homogeneity under v -> b v");
  cmds.push_back({s, cmd_angle});

  s = app.add_subcommand("probe", "Search for non-smooth points, flat faces or rho_ab asymmetry");
  common(s), norm_flags(s), ab(s), sampling(s);
  s->add_option("--kind", o.kind, "smoothness | strict_convexity | symmetry")->required();
  s->add_option("--out", o.out_path, "Write line-delimited per-sample records here");
  cmds.push_back({s, cmd_probe});

  s = app.add_subcommand("identity", "Quartic-identity and symmetry residuals at (u, v)");
  common(s), norm_flags(s), uv(s), ab(s);
  cmds.push_back({s, cmd_identity});

  s = app.add_subcommand("constant", "Sampled angular or norm-equivalence constant between two norms");
  common(s), norm_flags(s), ab(s), sampling(s);
  s->add_option("--norm2", o.norm2_text, "Second norm expression");
  s->add_option("--kind", o.kind, "angular | equivalence")->required();
  cmds.push_back({s, cmd_constant});

  s = app.add_subcommand("preserver", "Check whether a linear map preserves rho_ab-orthogonality");
  common(s), norm_flags(s), ab(s), sampling(s);
  s->add_option("--norm2", o.norm2_text, "Codomain norm (default: --norm)");
  s->add_option("--matrix", o.matrix_text, "Matrix rows 'a,b;c,d'");
  cmds.push_back({s, cmd_preserver});

  s = app.add_subcommand("mine", "Search for pairs separating two relations (2-D)");
  common(s), norm_flags(s), ab(s), tol(s), sampling(s), relation_flag(s);
  s->add_option("--relation2", o.relation2_text, "Second relation");
  s->add_option("--resolution", o.resolution, "Angular samples per locus (default 720)");
  cmds.push_back({s, cmd_mine});

  s = app.add_subcommand("audit", "Sampled check of the norm axioms");
  common(s), norm_flags(s), sampling(s);
  s->add_option("--tol", o.tol, "Tolerance (default 1e-10)");
  cmds.push_back({s, cmd_audit});

  std::vector<const char*> argv{"normderiv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  for (const entry& e : cmds) {
    if (!e.app->parsed()) continue;
    try {
      const context ctx(o, args);
      json doc = e.fn(ctx);
      emit(out, doc, o.format);
      return 0;
    } catch (const usage_error& ex) {
      err << "usage error: " << ex.what() << "\n";
      return 2;
    } catch (const syntax_error& ex) {
      err << "usage error: " << ex.what() << "\n";
      return 2;
    } catch (const domain_error& ex) {
      err << "usage error: " << ex.what() << "\n";
      return 2;
    } catch (const error& ex) {
      err << "error: " << ex.what() << "\n";
      return 1;
    } catch (const std::exception& ex) {
      err << "error: " << ex.what() << "\n";
      return 1;
    }
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace normderiv::cli

#endif
