#include <gtest/gtest.h>

#include <string>

#include "normderiv/error.hpp"
#include "normderiv/parse.hpp"
#include "support.hpp"

namespace nd = normderiv;
using nd::norm_ast;

TEST(parse, leaves) {
  EXPECT_EQ(nd::parse_norm("l1", 3), norm_ast::l1(3));
  EXPECT_EQ(nd::parse_norm("L2", 2), norm_ast::l2(2));
  EXPECT_EQ(nd::parse_norm("linf", 4), norm_ast::linf(4));
  EXPECT_EQ(nd::parse_norm("lp(3)", 2), norm_ast::lp(3, 2));
  EXPECT_EQ(nd::parse_norm("lp(2)", 2), norm_ast::l2(2));
  EXPECT_EQ(nd::parse_norm("wlp(2; 1, 4)", 2), norm_ast::wlp(2, {1, 4}));
  EXPECT_EQ(nd::parse_norm("wlp(inf; 1, 4)", 2).param(), INFINITY);
  EXPECT_EQ(nd::parse_norm("wlp(\xE2\x88\x9E; 1, 4)", 2).param(), INFINITY);
}

TEST(parse, composites_and_whitespace) {
  const norm_ast expected = norm_ast::max(norm_ast::scale(0.5, norm_ast::l1(2)), norm_ast::l2(2));
  EXPECT_EQ(nd::parse_norm("max(scale(0.5, l1), l2)", 2), expected);
  EXPECT_EQ(nd::parse_norm("  max ( scale(5e-1,l1) ,l2 ) ", 2), expected);
  EXPECT_EQ(nd::parse_norm("sum(l1, linf)", 2), norm_ast::sum(norm_ast::l1(2), norm_ast::linf(2)));
}

TEST(parse, print_forms) {
  EXPECT_EQ(nd::print_norm(nd::parse_norm("SUM( l1 ,L2 )", 2)), "sum(l1, l2)");
  EXPECT_EQ(nd::print_norm(nd::parse_norm("wlp(2;1,4)", 2)), "wlp(2; 1, 4)");
  EXPECT_EQ(nd::print_norm(nd::parse_norm("scale(.5, l1)", 2)), "scale(0.5, l1)");
  EXPECT_EQ(nd::print_norm(nd::parse_norm("wlp(inf; 2, 3)", 2)), "wlp(inf; 2, 3)");
}

TEST(parse, rejects_with_offsets) {
  auto offset_of = [](const std::string& text, std::size_t dim) -> std::size_t {
    try {
      nd::parse_norm(text, dim);
    } catch (const nd::syntax_error& e) {
      return e.offset();
    } catch (const nd::parameter_error& e) {
      return e.offset();
    }
    ADD_FAILURE() << "accepted: " << text;
    return 0;
  };
  EXPECT_EQ(offset_of("lp(0.5)", 2), 3u);
  EXPECT_EQ(offset_of("lp(1)", 2), 3u);
  EXPECT_EQ(offset_of("l3", 2), 0u);
  EXPECT_EQ(offset_of("max(l1 l2)", 2), 7u);
  EXPECT_EQ(offset_of("scale(0, l1)", 2), 6u);
  EXPECT_EQ(offset_of("scale(-1, l1)", 2), 6u);
  EXPECT_EQ(offset_of("l1)", 2), 2u);
  EXPECT_EQ(offset_of("wlp(2; 1, 0)", 2), 10u);
  EXPECT_EQ(offset_of("wlp(0.5; 1, 1)", 2), 4u);
  EXPECT_EQ(offset_of("wlp(2; 1, 2, 3)", 2), 14u);
  EXPECT_THROW(nd::parse_norm("", 2), nd::syntax_error);
  EXPECT_THROW(nd::parse_norm("lp(1e)", 2), nd::syntax_error);
}

TEST(parse, dimension_must_be_at_least_two) { EXPECT_THROW(nd::parse_norm("l2", 1), nd::domain_error); }

TEST(parse, random_round_trip) {
  nd::splitmix64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::size_t dim = 2 + rng() % 3;
    const norm_ast n = nd::testing::random_ast(rng, dim, 4);
    ASSERT_LE(nd::depth(n), 4u);
    const std::string text = nd::print_norm(n);
    EXPECT_EQ(nd::parse_norm(text, dim), n) << text;
  }
}

TEST(parse, random_mutations_rejected) {
  nd::splitmix64 rng(12);
  for (int i = 0; i < 500; ++i) {
    const std::string text = nd::print_norm(nd::testing::random_ast(rng, 2, 4));
    const std::string bad = nd::testing::mutate(text, rng);
    std::size_t offset = bad.size() + 1;
    try {
      nd::parse_norm(bad, 2);
    } catch (const nd::syntax_error& e) {
      offset = e.offset();
    } catch (const nd::parameter_error& e) {
      offset = e.offset();
    }
    EXPECT_LE(offset, bad.size()) << text << " -> " << bad;
  }
}
