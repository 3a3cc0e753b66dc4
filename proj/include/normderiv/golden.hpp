#ifndef NORMDERIV_GOLDEN_HPP
#define NORMDERIV_GOLDEN_HPP

#include <cmath>

namespace normderiv {

struct line_minimum {
  double x;
  double fx;
};

/// Golden-section search for a minimum of `f` on [a, b]. Exact for convex
/// (more generally unimodal) functions; `iterations` interval reductions by
/// the golden ratio are performed.
template <typename F>
line_minimum golden_section_minimize(F&& f, double a, double b, int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? line_minimum{c, fc} : line_minimum{d, fd};
}

/// Maximizing counterpart of golden_section_minimize.
template <typename F>
line_minimum golden_section_maximize(F&& f, double a, double b, int iterations) {
  line_minimum m = golden_section_minimize([&](double x) { return -f(x); }, a, b, iterations);
  return {m.x, -m.fx};
}

}  // namespace normderiv

#endif
