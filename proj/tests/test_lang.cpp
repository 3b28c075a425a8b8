#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "support/generators.hpp"
#include "tempra/lang.hpp"

using namespace tempra;

namespace {

Vocabulary two_events_one_timex() {
  Vocabulary v;
  v.add("ei1", NodeKind::Event);
  v.add("ei2", NodeKind::Event);
  v.add("t1", NodeKind::Timex);
  return v;
}

}  // namespace

TEST_SUITE("lang") {

TEST_CASE("vocabulary rejects duplicates and reference entries") {
  Vocabulary v = two_events_one_timex();
  CHECK(v.size() == 3);
  CHECK(v.contains("t1"));
  CHECK(v.kind_of("ei2") == NodeKind::Event);
  CHECK(v.kind_of("nope") == std::nullopt);
  CHECK_THROWS_AS(v.add("ei1", NodeKind::Event), std::invalid_argument);
  CHECK_THROWS_AS(v.add("r", NodeKind::Reference), std::invalid_argument);
}

TEST_CASE("parsing leaves, applications, and nesting") {
  CHECK(LogicalForm::parse("ei1").print() == "ei1");
  CHECK(LogicalForm::parse("(before ei1)").print() == "(before ei1)");
  CHECK(LogicalForm::parse("  (intersection (before ei1) (after t3))  ").print() ==
        "(intersection (before ei1) (after t3))");
  LogicalForm leaf = LogicalForm::parse("ei1");
  CHECK(leaf.root()->kind == Expr::Kind::Constant);
  LogicalForm unary = LogicalForm::parse("(before ei1)");
  CHECK(unary.root()->kind == Expr::Kind::Relation);
  CHECK(unary.root()->rel == AllenRelation::Before);
}

TEST_CASE("parse errors carry the offending offset") {
  CHECK_THROWS_AS(LogicalForm::parse("(before)"), LangError);
  CHECK_THROWS_AS(LogicalForm::parse("(before ei1"), LangError);
  CHECK_THROWS_AS(LogicalForm::parse("(frobnicate ei1)"), LangError);
  CHECK_THROWS_AS(LogicalForm::parse("(union ei1)"), LangError);
  CHECK_THROWS_AS(LogicalForm::parse("(before ei1 ei2)"), LangError);
  CHECK_THROWS_AS(LogicalForm::parse(""), LangError);
  CHECK_THROWS_AS(LogicalForm::parse("ei1)"), LangError);
  try {
    LogicalForm::parse("(frobnicate ei1)");
    FAIL("expected a parse error");
  } catch (const LangError& e) {
    CHECK(e.offset() == 1);  // the predicate name starts after '('
  }
}

TEST_CASE("type checking binds constants to the vocabulary") {
  Vocabulary v = two_events_one_timex();
  CHECK(LogicalForm::parse("(union ei1 ei2)").type_check(v) == SemanticType::TimeInterval);
  CHECK(LogicalForm::parse("(meets (overlaps t1))").type_check(v) ==
        SemanticType::TimeInterval);
  CHECK_THROWS_WITH_AS(LogicalForm::parse("(before ei9)").type_check(v),
                       doctest::Contains("ei9"), LangError);
}

TEST_CASE("preorder action linearization") {
  ActionSequence leaf = LogicalForm::parse("ei1").to_actions();
  REQUIRE(leaf.size() == 2);
  CHECK(leaf[0] == Production::start());
  CHECK(leaf[1] == Production::constant("ei1"));

  ActionSequence unary = LogicalForm::parse("(before ei1)").to_actions();
  REQUIRE(unary.size() == 4);
  CHECK(unary[0] == Production::start());
  CHECK(unary[1] == Production::apply_fn1());
  CHECK(unary[2] == Production::fn1(AllenRelation::Before));
  CHECK(unary[3] == Production::constant("ei1"));

  ActionSequence binary = LogicalForm::parse("(union ei1 ei2)").to_actions();
  REQUIRE(binary.size() == 5);
  CHECK(binary[1] == Production::apply_fn2());
  CHECK(binary[2] == Production::fn2(SetOp::Union));
  CHECK(binary[3] == Production::constant("ei1"));
  CHECK(binary[4] == Production::constant("ei2"));
}

TEST_CASE("action replay inverts linearization and rejects broken sequences") {
  LogicalForm lf = LogicalForm::parse("(intersection (before ei1) (after ei2))");
  CHECK(LogicalForm::from_actions(lf.to_actions()) == lf);

  ActionSequence truncated = lf.to_actions();
  truncated.pop_back();
  CHECK_THROWS_AS(LogicalForm::from_actions(truncated), LangError);

  // An Fn2 name where an Fn1 is pending is inapplicable.
  ActionSequence wrong = {Production::start(), Production::apply_fn1(),
                          Production::fn2(SetOp::Union)};
  CHECK_THROWS_AS(LogicalForm::from_actions(wrong), LangError);

  ActionSequence trailing = lf.to_actions();
  trailing.push_back(Production::constant("ei1"));
  CHECK_THROWS_AS(LogicalForm::from_actions(trailing), LangError);
}

TEST_CASE("action length counts the derivation") {
  CHECK(LogicalForm::parse("ei1").action_length() == 2);
  CHECK(LogicalForm::parse("(before ei1)").action_length() == 4);
  CHECK(LogicalForm::parse("(intersection (before ei1) (after ei2))").action_length() == 9);
  for (const char* text : {"ei1", "(before ei1)", "(union (meets t1) ei2)"}) {
    LogicalForm lf = LogicalForm::parse(text);
    CHECK(lf.action_length() == static_cast<int>(lf.to_actions().size()));
  }
}

TEST_CASE("depth counts tree levels") {
  CHECK(LogicalForm::parse("ei1").depth() == 1);
  CHECK(LogicalForm::parse("(before ei1)").depth() == 2);
  CHECK(LogicalForm::parse("(intersection (before ei1) ei2)").depth() == 3);
}

TEST_CASE("production inventory per nonterminal") {
  Vocabulary v = two_events_one_timex();
  auto start = productions_for(Symbol::Start, v);
  REQUIRE(start.size() == 1);
  CHECK(start[0] == Production::start());

  auto intervals = productions_for(Symbol::TimeInterval, v);
  REQUIRE(intervals.size() == 5);  // two applications plus three constants
  CHECK(intervals[0] == Production::apply_fn1());
  CHECK(intervals[1] == Production::apply_fn2());
  CHECK(intervals[2] == Production::constant("ei1"));
  CHECK(intervals[3] == Production::constant("ei2"));
  CHECK(intervals[4] == Production::constant("t1"));

  auto fn1 = productions_for(Symbol::Fn1, v);
  CHECK(fn1.size() == 12);  // equals is excluded from generation
  for (const Production& p : fn1) CHECK(p.rel != AllenRelation::Equals);
  auto fn1_full = productions_for(Symbol::Fn1, v, GrammarOptions{.include_equals = true});
  CHECK(fn1_full.size() == 13);

  auto fn2 = productions_for(Symbol::Fn2, v);
  REQUIRE(fn2.size() == 2);
  CHECK(fn2[0] == Production::fn2(SetOp::Union));
  CHECK(fn2[1] == Production::fn2(SetOp::Intersection));

  CHECK(relation_inventory().size() == 12);
  CHECK(relation_inventory(GrammarOptions{.include_equals = true}).size() == 13);
}

TEST_CASE("production rendering names the grammar rule") {
  CHECK(Production::start().lhs() == Symbol::Start);
  CHECK(Production::constant("ei1").lhs() == Symbol::TimeInterval);
  CHECK(Production::fn1(AllenRelation::Before).lhs() == Symbol::Fn1);
  CHECK(Production::fn2(SetOp::Union).lhs() == Symbol::Fn2);
  CHECK(Production::apply_fn1().to_string() == "TimeInterval -> [Fn1, TimeInterval]");
  auto strings = actions_to_strings(LogicalForm::parse("ei1").to_actions());
  REQUIRE(strings.size() == 2);
  CHECK(strings[0] == "START -> TimeInterval");
}

TEST_CASE("print parses back to the same form") {
  std::mt19937 rng(31);
  Vocabulary v = two_events_one_timex();
  for (int i = 0; i < 300; ++i) {
    LogicalForm lf = testgen::random_form(rng, v, 4);
    CHECK(LogicalForm::parse(lf.print()) == lf);
    CHECK(LogicalForm::from_actions(lf.to_actions()) == lf);
  }
}

TEST_CASE("forms order by their serialization") {
  LogicalForm a = LogicalForm::parse("(after ei1)");
  LogicalForm b = LogicalForm::parse("(before ei1)");
  CHECK(a < b);
  CHECK_FALSE(b < a);
  CHECK_FALSE(a < a);
}

}  // TEST_SUITE
