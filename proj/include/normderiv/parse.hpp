#ifndef NORMDERIV_PARSE_HPP
#define NORMDERIV_PARSE_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ast.hpp"
#include "error.hpp"

namespace normderiv {

/// A parameter-domain violation found while parsing (p <= 1, weight <= 0, ...).
class parameter_error : public domain_error {
public:
  parameter_error(const std::string& what, std::size_t offset)
      : domain_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

namespace detail {

enum class token_kind { ident, number, lparen, rparen, comma, semicolon, end };

struct token {
  token_kind kind;
  std::size_t offset;
  std::string text;  // lowercased identifier or raw number text
  double value = 0.0;
};

class lexer {
public:
  explicit lexer(std::string_view src) : src_(src) {}

  std::vector<token> run() {
    std::vector<token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({token_kind::end, pos_, {}});
        return out;
      }
      const std::size_t start = pos_;
      const char c = src_[pos_];
      switch (c) {
        case '(': ++pos_; out.push_back({token_kind::lparen, start, "("}); continue;
        case ')': ++pos_; out.push_back({token_kind::rparen, start, ")"}); continue;
        case ',': ++pos_; out.push_back({token_kind::comma, start, ","}); continue;
        case ';': ++pos_; out.push_back({token_kind::semicolon, start, ";"}); continue;
        default: break;
      }
      // U+221E INFINITY
      if (src_.substr(pos_, 3) == "\xE2\x88\x9E") {
        pos_ += 3;
        out.push_back({token_kind::ident, start, "inf"});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string id;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_])))
          id += static_cast<char>(std::tolower(static_cast<unsigned char>(src_[pos_++])));
        out.push_back({token_kind::ident, start, id});
        continue;
      }
      if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(number(start));
        continue;
      }
      throw syntax_error(std::string("unexpected character '") + c + "'", start);
    }
  }

private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  // [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
  token number(std::size_t start) {
    std::size_t i = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i, ++n;
      return n;
    };
    if (src_[i] == '-' || src_[i] == '+') ++i;
    std::size_t mantissa = digits();
    if (i < src_.size() && src_[i] == '.') {
      ++i;
      mantissa += digits();
    }
    if (mantissa == 0) throw syntax_error("malformed number", start);
    if (i < src_.size() && (src_[i] == 'e' || src_[i] == 'E')) {
      ++i;
      if (i < src_.size() && (src_[i] == '-' || src_[i] == '+')) ++i;
      if (digits() == 0) throw syntax_error("malformed exponent", start);
    }
    if (i < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[i])) || src_[i] == '.'))
      throw syntax_error("malformed number", start);
    std::string text(src_.substr(pos_, i - pos_));
    pos_ = i;
    std::string_view body = text;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(body.data(), body.data() + body.size(), v);
    if (res.ec != std::errc() || res.ptr != body.data() + body.size() || !std::isfinite(v))
      throw syntax_error("number out of range", start);
    return {token_kind::number, start, text, v};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class parser {
public:
  parser(std::vector<token> toks, std::size_t dim) : toks_(std::move(toks)), dim_(dim) {}

  norm_ast run() {
    norm_ast n = norm();
    if (peek().kind != token_kind::end) throw syntax_error("trailing input '" + peek().text + "'", peek().offset);
    return n;
  }

private:
  const token& peek() const { return toks_[pos_]; }
  const token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  const token& expect(token_kind k, const char* what) {
    if (peek().kind != k) {
      const token& t = peek();
      throw syntax_error(std::string("expected ") + what + (t.kind == token_kind::end ? " before end of input"
                                                                                       : ", found '" + t.text + "'"),
                         t.offset);
    }
    return next();
  }

  double positive(const char* what) {
    const token& t = expect(token_kind::number, "number");
    if (!(t.value > 0.0)) throw parameter_error(std::string(what) + " must be > 0, got " + t.text, t.offset);
    return t.value;
  }

  norm_ast norm() {
    const token& head = expect(token_kind::ident, "norm name");
    const std::string name = head.text;
    const std::size_t at = head.offset;
    if (name == "l1") return norm_ast::l1(dim_);
    if (name == "l2") return norm_ast::l2(dim_);
    if (name == "linf") return norm_ast::linf(dim_);
    if (name == "lp") {
      expect(token_kind::lparen, "'('");
      const token& t = expect(token_kind::number, "exponent");
      if (!(t.value > 1.0)) throw parameter_error("lp exponent must be > 1, got " + t.text, t.offset);
      expect(token_kind::rparen, "')'");
      return norm_ast::lp(t.value, dim_);
    }
    if (name == "wlp") {
      expect(token_kind::lparen, "'('");
      double p;
      if (peek().kind == token_kind::ident && peek().text == "inf") {
        next();
        p = std::numeric_limits<double>::infinity();
      } else {
        const token& t = expect(token_kind::number, "exponent or inf");
        if (!(t.value >= 1.0)) throw parameter_error("wlp exponent must be >= 1, got " + t.text, t.offset);
        p = t.value;
      }
      expect(token_kind::semicolon, "';'");
      std::vector<double> w{positive("weight")};
      while (peek().kind == token_kind::comma) {
        next();
        w.push_back(positive("weight"));
      }
      const token& close = expect(token_kind::rparen, "')'");
      if (w.size() != dim_)
        throw parameter_error("wlp has " + std::to_string(w.size()) + " weights but dimension is " +
                                  std::to_string(dim_),
                              close.offset);
      return norm_ast::wlp(p, std::move(w));
    }
    if (name == "max" || name == "sum") {
      expect(token_kind::lparen, "'('");
      norm_ast a = norm();
      expect(token_kind::comma, "','");
      norm_ast b = norm();
      expect(token_kind::rparen, "')'");
      return name == "max" ? norm_ast::max(std::move(a), std::move(b)) : norm_ast::sum(std::move(a), std::move(b));
    }
    if (name == "scale") {
      expect(token_kind::lparen, "'('");
      const double c = positive("scale factor");
      expect(token_kind::comma, "','");
      norm_ast inner = norm();
      expect(token_kind::rparen, "')'");
      return norm_ast::scale(c, std::move(inner));
    }
    throw syntax_error("unknown norm '" + name + "'", at);
  }

  std::vector<token> toks_;
  std::size_t pos_ = 0;
  std::size_t dim_;
};

}  // namespace detail

/// Parses the norm DSL:
///
///   norm := l1 | l2 | linf | lp(p) | wlp(p; w1, ..., wn) | max(norm, norm)
///         | sum(norm, norm) | scale(c, norm)
///
/// Throws syntax_error for grammar violations and parameter_error for
/// out-of-domain parameters; both carry the byte offset of the culprit.
inline norm_ast parse_norm(std::string_view text, std::size_t dim) {
  if (dim < 2) throw domain_error("ambient dimension must be >= 2, got " + std::to_string(dim));
  return detail::parser(detail::lexer(text).run(), dim).run();
}

}  // namespace normderiv

#endif
