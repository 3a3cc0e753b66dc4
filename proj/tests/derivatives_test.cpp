#include <gtest/gtest.h>

#include <cmath>

#include "normderiv/derivatives.hpp"
#include "normderiv/parse.hpp"
#include "support.hpp"

namespace nd = normderiv;
using nd::side;
using nd::vec;

namespace {

nd::norm_ast norm(const char* text) { return nd::parse_norm(text, 2); }

double plus(const nd::norm_ast& n, const vec& u, const vec& v) { return nd::rho_pm(n, u, v, side::plus).value; }
double minus(const nd::norm_ast& n, const vec& u, const vec& v) { return nd::rho_pm(n, u, v, side::minus).value; }

}  // namespace

TEST(alpha_beta, admissible_band) {
  EXPECT_NO_THROW(nd::alpha_beta(0.0, 0.5));
  EXPECT_NO_THROW(nd::alpha_beta(0.5, 0.49));
  EXPECT_THROW(nd::alpha_beta(0.0, 0.0), nd::domain_error);
  EXPECT_THROW(nd::alpha_beta(0.5, 0.5), nd::domain_error);
  EXPECT_THROW(nd::alpha_beta(-0.1, 0.5), nd::domain_error);
  EXPECT_THROW(nd::alpha_beta(1.0, 0.0), nd::domain_error);
  EXPECT_THROW(nd::lambda_weight(1.5), nd::domain_error);
  EXPECT_EQ(nd::alpha_beta(0.2, 0.3).swapped(), nd::alpha_beta(0.3, 0.2));
}

TEST(rho_pm, linf_example) {
  const auto n = norm("linf");
  const double a = 0.3, b = 0.4;
  const vec u{1, 1}, v{-1 / (2 * a), 1 / (2 * b)};
  EXPECT_EQ(nd::dir_deriv_exact(n, u, v, side::plus), 1 / (2 * b));
  EXPECT_EQ(plus(n, u, v), 1.25);
  EXPECT_EQ(minus(n, u, v), -1 / (2 * a));
  EXPECT_EQ(plus(n, u, vec{1, -1}), 1.0);
  EXPECT_EQ(minus(n, u, vec{1, -1}), -1.0);
  EXPECT_NEAR(nd::rho_ab(n, u, v, {a, b}), 0.0, 1e-15);
  EXPECT_NEAR(nd::rho_ab(n, u, vec{1, -1}, {0.5, 1.0 / 3}), -1.0 / 6, 1e-15);
}

TEST(rho_pm, l1_example) {
  const auto n = norm("l1");
  const vec u{1, 0};
  EXPECT_EQ(nd::dir_deriv_exact(n, u, vec{1, 1}, side::minus), 0.0);
  EXPECT_EQ(minus(n, u, vec{1, 1}), 0.0);
  EXPECT_EQ(plus(n, u, vec{1, 1}), 2.0);
  EXPECT_EQ(minus(n, u, vec{-1, 1}), -2.0);
  EXPECT_EQ(plus(n, u, vec{-1, 1}), 0.0);
  EXPECT_EQ(minus(n, u, vec{0, 2}), -2.0);
  EXPECT_EQ(plus(n, u, vec{0, 2}), 2.0);
  EXPECT_EQ(nd::rho(n, u, vec{0, 2}), 0.0);
}

TEST(rho_pm, zero_base_vector) {
  for (const auto& f : nd::testing::families()) {
    const auto n = nd::testing::family_norm(f);
    EXPECT_EQ(plus(n, vec{0, 0}, vec{1, -2}), 0.0) << f.text;
    EXPECT_EQ(minus(n, vec{0, 0}, vec{1, -2}), 0.0) << f.text;
  }
}

TEST(rho_pm, lp3_against_difference_quotient) {
  const auto n = norm("lp(3)");
  const vec u{1, 1}, v{1, 0};
  const double exact = plus(n, u, v);
  EXPECT_NEAR(exact, std::pow(2.0, -1.0 / 3), 1e-15);
  const double t = 1e-7;
  const double quotient = (nd::eval_norm(n, nd::axpy(t, v, u)) - nd::eval_norm(n, u)) / t;
  EXPECT_NEAR(nd::dir_deriv_exact(n, u, v, side::plus), quotient, 1e-6);
}

TEST(rho_pm, smooth_families_match_finite_differences) {
  nd::splitmix64 rng(3);
  for (const auto& f : nd::testing::families()) {
    if (!f.smooth) continue;
    const auto n = nd::testing::family_norm(f, 3);
    for (int i = 0; i < 200; ++i) {
      const vec u = nd::random_vector(rng, 3, 2.0), v = nd::random_vector(rng, 3, 2.0);
      const double fd = nd::testing::finite_difference_rho(n, u, v);
      const double scale = nd::eval_norm(n, u) * nd::eval_norm(n, v);
      EXPECT_NEAR(plus(n, u, v), fd, 1e-7 * scale) << f.text;
      EXPECT_NEAR(minus(n, u, v), fd, 1e-7 * scale) << f.text;
    }
  }
}

TEST(rho_pm, euclidean_collapse) {
  const auto n = nd::parse_norm("l2", 4);
  nd::splitmix64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const vec u = nd::random_vector(rng, 4, 3.0), v = nd::random_vector(rng, 4, 3.0);
    const double dot = nd::testing::euclid_dot(u, v);
    EXPECT_NEAR(plus(n, u, v), dot, 1e-10 * (1 + std::abs(dot)));
    EXPECT_NEAR(minus(n, u, v), dot, 1e-10 * (1 + std::abs(dot)));
  }
}

TEST(rho_pm, one_sided_ordering_and_bounds) {
  nd::splitmix64 rng(5);
  for (const auto& f : nd::testing::families()) {
    const auto n = nd::testing::family_norm(f, 3);
    for (int i = 0; i < 300; ++i) {
      const vec u = nd::testing::awkward_vector(rng, 3), v = nd::testing::awkward_vector(rng, 3);
      const nd::rho_pair p = nd::rho_both(n, u, v);
      const double bound = nd::eval_norm(n, u) * nd::eval_norm(n, v) * (1 + 1e-12);
      EXPECT_LE(p.minus, p.plus + 1e-12 * bound) << f.text;
      EXPECT_LE(std::abs(p.minus), bound) << f.text;
      EXPECT_LE(std::abs(p.plus), bound) << f.text;
      // rho_-(u, v) = -rho_+(u, -v)
      EXPECT_NEAR(p.minus, -plus(n, u, nd::scaled(-1.0, v)), 1e-12 * bound) << f.text;
    }
  }
}

TEST(rho_pm_numeric, examples) {
  const auto r = nd::rho_pm_numeric(nd::parse_norm("l2", 2), vec{1, 1}, vec{1, 0}, side::plus, 1e-8);
  EXPECT_NEAR(r.value, 1.0, 1e-7);
  EXPECT_EQ(r.method, nd::deriv_method::numeric);

  const auto k = nd::rho_pm_numeric(norm("linf"), vec{1, 1}, vec{1, -1}, side::minus, 1e-8);
  EXPECT_NEAR(k.value, -1.0, 1e-7);
  EXPECT_LE(std::abs(k.value + 1.0), k.enclosure_width);

  const auto n = norm("lp(3)");
  const auto e = nd::rho_pm_numeric(n, vec{1, 1}, vec{1, 0}, side::plus, 1e-8);
  EXPECT_LE(std::abs(e.value - plus(n, vec{1, 1}, vec{1, 0})), e.enclosure_width);
  EXPECT_TRUE(e.converged);
}

TEST(rho_pm_numeric, enclosures_contain_exact_values) {
  nd::splitmix64 rng(6);
  for (const auto& f : nd::testing::families()) {
    const auto n = nd::testing::family_norm(f, 2);
    for (int i = 0; i < 100; ++i) {
      const bool generic = i % 2 == 0;
      const vec u = generic ? nd::random_vector(rng, 2, 3.0) : nd::testing::awkward_vector(rng, 2);
      const vec v = generic ? nd::random_vector(rng, 2, 3.0) : nd::testing::awkward_vector(rng, 2);
      for (side s : {side::plus, side::minus}) {
        const auto num = nd::rho_pm_numeric(n, u, v, s, 1e-9);
        const double exact = nd::rho_pm(n, u, v, s).value;
        EXPECT_LE(std::abs(num.value - exact), num.enclosure_width)
            << f.text << " u=" << nd::format_vector(u) << " v=" << nd::format_vector(v) << " " << nd::to_string(s);
        if (f.smooth && generic) {
          EXPECT_LE(num.enclosure_width, 1e-6) << f.text;
        }
      }
    }
  }
}

TEST(rho_pm_numeric, sqrt_convergence_at_zero_coordinate_stays_sound) {
  // lp(1.5) is C^1 but not C^2 where a coordinate vanishes.
  const auto n = norm("lp(1.5)");
  const vec u{0, -1}, v{0.385, -2.44};
  for (side s : {side::plus, side::minus}) {
    const auto num = nd::rho_pm_numeric(n, u, v, s, 1e-9);
    EXPECT_LE(std::abs(num.value - nd::rho_pm(n, u, v, s).value), num.enclosure_width);
    EXPECT_LE(num.enclosure_width, 1e-2);
  }
}

TEST(sip, examples) {
  EXPECT_EQ(nd::sip(norm("l2"), vec{1, 0}, vec{1, 1}), 1.0);
  EXPECT_NEAR(nd::sip(norm("lp(3)"), vec{1, 1}, vec{1, 1}), std::pow(2.0, 2.0 / 3), 1e-15);
  EXPECT_THROW(nd::sip(norm("linf"), vec{1, -1}, vec{1, 1}), nd::nonsmooth_error);
  EXPECT_THROW(nd::sip(norm("l2"), vec{1, -1}, vec{0, 0}), nd::zero_vector_error);
}

TEST(rho_family, combinations) {
  const auto n = norm("l1");
  const vec u{1, 0}, w{0, 2};
  EXPECT_EQ(nd::rho_lambda(n, u, w, nd::lambda_weight(0.5)), nd::rho(n, u, w));
  EXPECT_EQ(nd::rho_lambda(n, u, w, nd::lambda_weight(1.0)), -2.0);
  EXPECT_NEAR(nd::rho_ab(n, u, w, {0.3, 0.4}), 2 * 0.4 - 2 * 0.3, 1e-15);
  EXPECT_TRUE(nd::is_smooth_at(nd::parse_norm("l2", 2), u, w));
  EXPECT_FALSE(nd::is_smooth_at(n, u, w));
}
