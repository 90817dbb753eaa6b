#include <gtest/gtest.h>

#include "criteria.hpp"
#include "tenet/tenet.hpp"

using namespace tenet;

namespace {

KnowledgeBase care_kb() { return parse_rules(read_file(tenet::testing::data_dir() / "care-o-bot" / "rules.kb")); }

} // namespace

TEST(Rules, ParsesTheCareFile) {
  KnowledgeBase kb = care_kb();
  EXPECT_EQ(kb.rules.size(), 9u);
  EXPECT_EQ(kb.formalizations.size(), 8u);
  EXPECT_EQ(kb.macros.size(), 2u);
  const DomainRule* d3 = kb.find_rule("d3");
  ASSERT_NE(d3, nullptr);
  EXPECT_EQ(d3->kind, RuleKind::Definition);
  EXPECT_EQ(d3->lhs, parse_expr(R"(!"enough food")"));
  EXPECT_EQ(kb.find_rule("d1")->note.value_or(""), "reminding ensures the task is done");
  EXPECT_EQ(kb.formalizations[0].guards.at(0).allowed, (std::vector<std::string>{"breakfast", "lunch", "dinner"}));
}

TEST(Rules, PrintParsesBack) {
  KnowledgeBase kb = care_kb();
  EXPECT_EQ(parse_rules(print_rules(kb)), kb);
}

TEST(Rules, AsFormula) {
  DomainRule imp = parse_rule_line(R"(d1: "remind"(X) => "do"(X))");
  EXPECT_EQ(imp.as_formula(), parse_expr(R"([]("remind"(X) -> "do"(X)))"));
  DomainRule def = parse_rule_line("d: a == b");
  EXPECT_EQ(def.as_formula(), parse_expr("[](a -> b) & [](b -> a)"));
}

TEST(Rules, Errors) {
  EXPECT_THROW(parse_rules("d1: a => b\nd1: b => c\n"), KnowledgeBaseError);
  EXPECT_THROW(parse_rule_line("d1: a == a"), KnowledgeBaseError);
  EXPECT_THROW(parse_rules("form: \"x\" ~> NOPE\n"), KnowledgeBaseError);
  EXPECT_THROW(parse_rules("macro M(X) := \"informal\"\n"), KnowledgeBaseError);
  EXPECT_THROW(parse_rules("form: p ~> q\n"), KnowledgeBaseError);
  EXPECT_THROW(parse_rules("form: \"x\"(X) ~> p where Y in {a}\n"), KnowledgeBaseError);
  EXPECT_THROW(parse_rules("form: \"x\" ~> PHI(a)\nmacro PHI := p\n"), KnowledgeBaseError);
  try {
    parse_rules("d1: a => b\n\nd2: a -> \n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_rule_line("no colon here"), ParseError);
}

TEST(Rules, CommentsRespectQuotes) {
  DomainRule r = parse_rule_line(R"(d1: "issue #4" => b  # trailing note)");
  EXPECT_EQ(r.lhs, informal("issue #4"));
  EXPECT_EQ(r.note.value_or(""), "trailing note");
}

TEST(Rules, AddRuleRejectsDuplicates) {
  KnowledgeBase kb = care_kb();
  EXPECT_THROW(add_rule(kb, parse_rule_line("d1: a => b")), KnowledgeBaseError);
  EXPECT_EQ(add_rule(kb, parse_rule_line("d10: a => b")).rules.size(), 10u);
}

TEST(MatchRules, ImplicationAtNegativeOccurrence) {
  auto moves = match_rules(care_kb(), parse_expr(R"(!"keep healthy")"));
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].rule_id, "d6");
  EXPECT_EQ(moves[0].occurrence.polarity, Polarity::Negative);
  EXPECT_EQ(moves[0].result, parse_expr(R"(!("enough food" & "enough drink" & "correct medication"))"));
}

TEST(MatchRules, ImplicationAtPositiveOccurrence) {
  auto moves = match_rules(care_kb(), parse_expr(R"(!"do"(breakfast))"));
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].rule_id, "d2");
  EXPECT_EQ(moves[0].result, parse_expr(R"(!"remind"(breakfast))"));
  EXPECT_EQ(moves[0].premise, parse_expr(R"([](!"remind"(breakfast) -> !"do"(breakfast)))"));
}

TEST(MatchRules, DefinitionMatchesAnywhere) {
  auto moves = match_rules(care_kb(), parse_expr(R"(!"correct medication")"));
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].result, parse_expr(R"(!!"issued != prescribed")"));
  moves = match_rules(care_kb(), parse_expr(R"(q -> !"enough FOOD")"));
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].occurrence.path, (Path{1}));
}

TEST(MatchRules, RenamesRuleVariablesApart) {
  KnowledgeBase kb = parse_rules("r: p(X) => q(X, Y)\n");
  auto moves = match_rules(kb, parse_expr("q(b, X) | r"));
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].result, parse_expr("p(b) | r"));
  EXPECT_EQ(moves[0].premise, parse_expr("[](p(b) -> q(b, X))"));
}

TEST(Formalize, GuardsAndComposition) {
  KnowledgeBase kb = care_kb();
  auto f = match_formalizations(kb, parse_expr(R"(!"remind"(lunch))"));
  ASSERT_TRUE(f);
  EXPECT_EQ(f->result, parse_expr("!PHI(lunch)"));
  EXPECT_FALSE(match_formalizations(kb, parse_expr(R"(!"remind"(elevenses))")));
  f = match_formalizations(kb, parse_expr(R"("monitor behaviour" & "out of charge")"));
  ASSERT_TRUE(f);
  EXPECT_EQ(f->result, parse_expr("[](deteriorated -> alerted) & <>(charge = 0)"));
  EXPECT_FALSE(match_formalizations(kb, parse_expr(R"("monitor behaviour" & "keep safe")")));
}

TEST(Formalize, FreeTemplateVariablesAvoidTheNode) {
  KnowledgeBase kb = parse_rules("form: \"obey\" ~> [](request(X) -> <>done(X))\n");
  auto f = match_formalizations(kb, parse_expr(R"("obey" & p(X))"));
  ASSERT_TRUE(f);
  EXPECT_EQ(f->result, parse_expr("[](request(X_1) -> <>done(X_1)) & p(X)"));
}

TEST(Macros, Expand) {
  KnowledgeBase kb = care_kb();
  EXPECT_EQ(expand_macros(kb, parse_expr("!PHI(breakfast)")),
            parse_expr("![](time(breakfast) -> eating(breakfast) | () remind(breakfast))"));
  Expr psi = expand_macros(kb, parse_expr("PSI"));
  EXPECT_FALSE(psi.contains_macro());
  EXPECT_EQ(psi.variables(), (std::set<std::string>{"T", "T'"}));
}

TEST(Macros, ParametersDoNotCaptureArguments) {
  KnowledgeBase kb = parse_rules("macro SW(X, Y) := p(X, Y, Z)\n");
  EXPECT_EQ(expand_macros(kb, parse_expr("SW(Y, X)")), parse_expr("p(Y, X, Z)"));
  EXPECT_EQ(expand_macros(kb, parse_expr("SW(Z, a)")), parse_expr("p(Z, a, Z_1)"));
}

TEST(Macros, RecursionIsBounded) {
  KnowledgeBase kb;
  kb.macros.push_back({"LOOP", {}, Not(Macro("LOOP"))});
  EXPECT_THROW(expand_macros(kb, Macro("LOOP")), KnowledgeBaseError);
}
