#ifndef NORMDERIV_TESTS_SUPPORT_HPP
#define NORMDERIV_TESTS_SUPPORT_HPP

#include <cctype>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "normderiv/ast.hpp"
#include "normderiv/derivatives.hpp"
#include "normderiv/norm.hpp"
#include "normderiv/parse.hpp"
#include "normderiv/random.hpp"
#include "normderiv/vector.hpp"

namespace normderiv::testing {

struct family {
  std::string text;
  bool smooth;
};

inline const std::vector<family>& families() {
  static const std::vector<family> all = {
      {"l1", false},           {"l2", true},           {"linf", false},
      {"lp(3)", true},         {"lp(1.5)", true},      {"wlp(2; 1, 4)", true},
      {"max(l1, l2)", false},  {"sum(l1, linf)", false}, {"scale(0.7, l2)", true},
  };
  return all;
}

inline norm_ast family_norm(const family& f, std::size_t dim = 2) {
  if (f.text.starts_with("wlp") && dim != 2) {
    std::vector<double> w(dim);
    for (std::size_t i = 0; i < dim; ++i) w[i] = 1.0 + 3.0 * static_cast<double>(i) / static_cast<double>(dim - 1);
    return norm_ast::wlp(2.0, w);
  }
  return parse_norm(f.text, dim);
}

/// Coordinates in [-3, 3], with a share of exact zeros and repeated
/// magnitudes so the non-smooth branches of every family get exercised.
inline vec awkward_vector(splitmix64& rng, std::size_t dim) {
  vec x(dim);
  for (auto& c : x) {
    const double pick = rng.unit();
    if (pick < 0.15)
      c = 0.0;
    else if (pick < 0.3)
      c = rng.unit() < 0.5 ? -1.0 : 1.0;
    else
      c = rng.uniform(-3.0, 3.0);
  }
  if (is_zero(x)) x[0] = 1.0;
  return x;
}

inline alpha_beta random_ab(splitmix64& rng) {
  for (;;) {
    const double a = rng.uniform(0.0, 0.95);
    const double b = rng.uniform(0.0, 0.95);
    if (a + b > 1e-3 && a + b < 0.999) return {a, b};
  }
}

inline double euclid_dot(vec_view a, vec_view b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Richardson-extrapolated central difference of t -> ||u + t v|| at 0 for
/// smooth points; independent of the closed-form derivative code. The step
/// keeps every coordinate of u + t v away from a sign change.
inline double finite_difference_rho(const norm_ast& n, vec_view u, vec_view v) {
  auto f = [&](double t) { return eval_norm(n, axpy(t, v, u)); };
  double h = 1e-3 * eval_norm(n, u) / eval_norm(n, v);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (v[i] != 0.0) h = std::min(h, 0.1 * std::abs(u[i] / v[i]));
  const double d1 = (f(h) - f(-h)) / (2 * h);
  const double d2 = (f(h / 2) - f(-h / 2)) / h;
  return eval_norm(n, u) * (4 * d2 - d1) / 3;
}

/// Random well-formed AST of the given depth bound over dimension `dim`.
inline norm_ast random_ast(splitmix64& rng, std::size_t dim, std::size_t max_depth) {
  const std::uint64_t pick = rng() % (max_depth > 1 ? 8 : 5);
  auto exponent = [&] { return std::round(rng.uniform(1.01, 6.0) * 1000.0) / 1000.0; };
  switch (pick) {
    case 0: return norm_ast::l1(dim);
    case 1: return norm_ast::l2(dim);
    case 2: return norm_ast::linf(dim);
    case 3: return norm_ast::lp(exponent(), dim);
    case 4: {
      std::vector<double> w(dim);
      for (auto& x : w) x = std::round(rng.uniform(0.1, 5.0) * 100.0) / 100.0;
      const double r = rng.unit();
      return norm_ast::wlp(r < 0.2 ? 1.0 : (r < 0.4 ? INFINITY : exponent()), std::move(w));
    }
    case 5: return norm_ast::max(random_ast(rng, dim, max_depth - 1), random_ast(rng, dim, max_depth - 1));
    case 6: return norm_ast::sum(random_ast(rng, dim, max_depth - 1), random_ast(rng, dim, max_depth - 1));
    default: return norm_ast::scale(rng.uniform(0.05, 4.0), random_ast(rng, dim, max_depth - 1));
  }
}

struct text_token {
  std::size_t offset;
  std::size_t length;
  char first;
};

/// Splits DSL text into identifier, number and punctuation tokens.
inline std::vector<text_token> split_tokens(const std::string& s) {
  std::vector<text_token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '.' ||
                              ((s[j] == '-' || s[j] == '+') && (s[j - 1] == 'e' || s[j - 1] == 'E'))))
        ++j;
    }
    out.push_back({i, j - i, c});
    i = j;
  }
  return out;
}

/// Deletes one token or flips one parenthesis; always yields invalid text.
inline std::string mutate(const std::string& s, splitmix64& rng) {
  const std::vector<text_token> toks = split_tokens(s);
  std::vector<std::size_t> parens;
  for (std::size_t k = 0; k < toks.size(); ++k)
    if (toks[k].first == '(' || toks[k].first == ')') parens.push_back(k);
  if (!parens.empty() && rng.unit() < 0.4) {
    std::string m = s;
    const text_token& t = toks[parens[rng() % parens.size()]];
    m[t.offset] = t.first == '(' ? ')' : '(';
    return m;
  }
  const text_token& t = toks[rng() % toks.size()];
  return s.substr(0, t.offset) + s.substr(t.offset + t.length);
}

}  // namespace normderiv::testing

#endif
