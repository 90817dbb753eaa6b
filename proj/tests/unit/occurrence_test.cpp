#include <gtest/gtest.h>

#include "tenet/tenet.hpp"

using namespace tenet;

TEST(Occurrence, PolarityFlipsUnderNegationAndAntecedent) {
  Expr e = parse_expr("!(a -> b) & [](a -> !c)");
  EXPECT_EQ(polarity_at(e, {0, 0, 0}), Polarity::Positive);
  EXPECT_EQ(polarity_at(e, {0, 0, 1}), Polarity::Negative);
  EXPECT_EQ(polarity_at(e, {1, 0, 0}), Polarity::Negative);
  EXPECT_EQ(polarity_at(e, {1, 0, 1, 0}), Polarity::Negative);
  EXPECT_EQ(polarity_at(e, {}), Polarity::Positive);
}

TEST(Occurrence, FindsInPreorderWithBindings) {
  Expr node = parse_expr(R"(!"do"(breakfast) & ("do"(lunch) -> q))");
  auto occ = find_occurrences(node, parse_expr(R"("do"(X))"));
  ASSERT_EQ(occ.size(), 2u);
  EXPECT_EQ(occ[0].path, (Path{0, 0}));
  EXPECT_EQ(occ[0].polarity, Polarity::Negative);
  EXPECT_EQ(occ[0].theta.apply(Var("X")), Const("breakfast"));
  EXPECT_EQ(occ[1].path, (Path{1, 0}));
  EXPECT_EQ(occ[1].polarity, Polarity::Negative);
}

TEST(Occurrence, MatchesAtAnyDepth) {
  auto occ = find_occurrences(parse_expr("!!!p"), parse_expr("!!p"));
  ASSERT_EQ(occ.size(), 1u);
  EXPECT_EQ(occ[0].path, (Path{0}));
  EXPECT_EQ(occ[0].polarity, Polarity::Negative);
  occ = find_occurrences(parse_expr("p(a) | [](q -> p(b))"), parse_expr("p(X)"));
  ASSERT_EQ(occ.size(), 2u);
  EXPECT_EQ(occ[1].theta.apply(Var("X")), Const("b"));
}

TEST(Occurrence, ReplaceAndSubexpr) {
  Expr e = parse_expr("a & (b | c)");
  EXPECT_EQ(subexpr_at(e, {1, 1}), formal("c"));
  EXPECT_EQ(replace_at(e, {1, 1}, formal("d")), parse_expr("a & (b | d)"));
  EXPECT_EQ(replace_at(e, {}, formal("z")), formal("z"));
  EXPECT_THROW(subexpr_at(e, {2}), PathError);
  EXPECT_THROW(subexpr_at(e, {0, 0}), PathError);
  EXPECT_EQ(print_path({1, 0}), "[1,0]");
}
