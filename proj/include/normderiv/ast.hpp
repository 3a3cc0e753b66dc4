#ifndef NORMDERIV_AST_HPP
#define NORMDERIV_AST_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace normderiv {

enum class norm_kind { l1, l2, linf, lp, wlp, max, sum, scale };

/// A norm on R^n built from l1/l2/linf/lp/weighted-lp leaves combined with
/// max, sum and positive scaling. Every value of this type is a genuine norm.
///
/// Nodes own their children by value, so copies are deep and `==` is
/// structural equality.
class norm_ast {
public:
  static norm_ast l1(std::size_t dim) { return leaf(norm_kind::l1, dim); }
  static norm_ast l2(std::size_t dim) { return leaf(norm_kind::l2, dim); }
  static norm_ast linf(std::size_t dim) { return leaf(norm_kind::linf, dim); }

  /// lp(2) is stored as l2.
  static norm_ast lp(double p, std::size_t dim) {
    if (!(p > 1.0) || !std::isfinite(p))
      throw domain_error("lp exponent must be finite and > 1");
    if (p == 2.0) return l2(dim);
    norm_ast n = leaf(norm_kind::lp, dim);
    n.param_ = p;
    return n;
  }

  /// Weighted lp; `p` may be +infinity. One positive weight per coordinate.
  static norm_ast wlp(double p, std::vector<double> weights) {
    if (!(p >= 1.0) || std::isnan(p))
      throw domain_error("wlp exponent must be >= 1 or inf");
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw domain_error("wlp weights must be finite and > 0");
    norm_ast n = leaf(norm_kind::wlp, weights.size());
    n.param_ = p;
    n.weights_ = std::move(weights);
    return n;
  }

  static norm_ast max(norm_ast a, norm_ast b) { return binary(norm_kind::max, std::move(a), std::move(b)); }
  static norm_ast sum(norm_ast a, norm_ast b) { return binary(norm_kind::sum, std::move(a), std::move(b)); }

  static norm_ast scale(double c, norm_ast inner) {
    if (!(c > 0.0) || !std::isfinite(c))
      throw domain_error("scale factor must be finite and > 0");
    norm_ast n = leaf(norm_kind::scale, inner.dim());
    n.param_ = c;
    n.children_.push_back(std::move(inner));
    return n;
  }

  norm_kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }

  /// Exponent of lp/wlp nodes, factor of scale nodes.
  double param() const noexcept { return param_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  const norm_ast& left() const { return children_.at(0); }
  const norm_ast& right() const { return children_.at(1); }
  const norm_ast& inner() const { return children_.at(0); }
  const std::vector<norm_ast>& children() const noexcept { return children_; }

  bool is_leaf() const noexcept { return children_.empty(); }

  friend bool operator==(const norm_ast&, const norm_ast&) = default;

private:
  norm_ast() = default;

  static norm_ast leaf(norm_kind k, std::size_t dim) {
    if (dim < 1) throw dimension_error("norm dimension must be positive");
    norm_ast n;
    n.kind_ = k;
    n.dim_ = dim;
    return n;
  }

  static norm_ast binary(norm_kind k, norm_ast a, norm_ast b) {
    if (a.dim() != b.dim())
      throw dimension_error("operands of max/sum have dimensions " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
    norm_ast n = leaf(k, a.dim());
    n.children_.push_back(std::move(a));
    n.children_.push_back(std::move(b));
    return n;
  }

  norm_kind kind_ = norm_kind::l2;
  std::size_t dim_ = 0;
  double param_ = 0.0;
  std::vector<double> weights_;
  std::vector<norm_ast> children_;
};

/// Shortest decimal text that reads back to exactly `x`; "inf" for +infinity.
inline std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Canonical rendering; `parse_norm(print_norm(a), a.dim()) == a`.
inline std::string print_norm(const norm_ast& n) {
  switch (n.kind()) {
    case norm_kind::l1: return "l1";
    case norm_kind::l2: return "l2";
    case norm_kind::linf: return "linf";
    case norm_kind::lp: return "lp(" + format_number(n.param()) + ")";
    case norm_kind::wlp: {
      std::string s = "wlp(" + format_number(n.param()) + ";";
      for (std::size_t i = 0; i < n.weights().size(); ++i) {
        s += i == 0 ? " " : ", ";
        s += format_number(n.weights()[i]);
      }
      return s + ")";
    }
    case norm_kind::max: return "max(" + print_norm(n.left()) + ", " + print_norm(n.right()) + ")";
    case norm_kind::sum: return "sum(" + print_norm(n.left()) + ", " + print_norm(n.right()) + ")";
    case norm_kind::scale: return "scale(" + format_number(n.param()) + ", " + print_norm(n.inner()) + ")";
  }
  return {};
}

/// Tree depth; a leaf has depth 1.
inline std::size_t depth(const norm_ast& n) {
  std::size_t d = 0;
  for (const auto& c : n.children()) d = std::max(d, depth(c));
  return d + 1;
}

}  // namespace normderiv

#endif
