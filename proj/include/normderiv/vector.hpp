#ifndef NORMDERIV_VECTOR_HPP
#define NORMDERIV_VECTOR_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ast.hpp"
#include "error.hpp"

namespace normderiv {

/// A point of R^n. Entries are finite.
using vec = std::vector<double>;
using vec_view = std::span<const double>;

inline vec axpy(double a, vec_view x, vec_view y) {
  vec r(y.begin(), y.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * x[i];
  return r;
}

inline vec scaled(double a, vec_view x) {
  vec r(x.begin(), x.end());
  for (double& e : r) e *= a;
  return r;
}

inline double dot(vec_view x, vec_view y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline bool is_zero(vec_view x) {
  for (double e : x)
    if (e != 0.0) return false;
  return true;
}

inline void require_dim(std::size_t expected, vec_view x, const char* name) {
  if (x.size() != expected)
    throw dimension_error(std::string(name) + " has " + std::to_string(x.size()) + " coordinates, expected " +
                          std::to_string(expected));
}

/// Parses "1,-0.5,2". Whitespace around entries is allowed.
inline vec parse_vector(std::string_view text) {
  vec out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view field = text.substr(pos, end - pos);
    std::size_t lead = 0;
    while (lead < field.size() && std::isspace(static_cast<unsigned char>(field[lead]))) ++lead;
    field.remove_prefix(lead);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v))
      throw syntax_error("bad vector entry '" + std::string(text.substr(pos, end - pos)) + "'", pos + lead);
    out.push_back(v);
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

inline std::string format_vector(vec_view x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ',';
    s += format_number(x[i]);
  }
  return s;
}

}  // namespace normderiv

#endif
