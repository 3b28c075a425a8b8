#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "tempra/dpd.hpp"

using namespace tempra;

namespace {

Vocabulary events(std::initializer_list<const char*> labels) {
  Vocabulary v;
  for (const char* label : labels) v.add(label, NodeKind::Event);
  return v;
}

std::vector<std::string> prints(const std::vector<LogicalForm>& forms) {
  std::vector<std::string> out;
  out.reserve(forms.size());
  for (const LogicalForm& f : forms) out.push_back(f.print());
  return out;
}

/// Every set-operation node must order its arguments greater-print first.
bool canonical(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Constant: return true;
    case Expr::Kind::Relation: return canonical(e->child);
    case Expr::Kind::SetOp:
      return LogicalForm(e->left).print() >= LogicalForm(e->right).print() &&
             canonical(e->left) && canonical(e->right);
  }
  return false;
}

}  // namespace

TEST_SUITE("dpd") {

TEST_CASE("collapsing compositions are detected") {
  CHECK(composition_collapses(AllenRelation::Before, AllenRelation::Before));
  CHECK_FALSE(composition_collapses(AllenRelation::Before, AllenRelation::After));
  CHECK_FALSE(composition_collapses(AllenRelation::Overlaps, AllenRelation::Overlaps));
  // equals composed with anything collapses to the other factor.
  for (AllenRelation g : relation_inventory(GrammarOptions{.include_equals = true})) {
    CHECK(composition_collapses(AllenRelation::Equals, g));
  }
  // No relation is a dead end: each admits some non-collapsing nesting.
  for (AllenRelation g : relation_inventory()) {
    bool some = false;
    for (AllenRelation f : relation_inventory()) {
      if (!composition_collapses(f, g)) some = true;
    }
    CHECK(some);
  }
}

TEST_CASE("the tightest bound admits only the constants") {
  SearchConfig cfg;
  cfg.max_actions = 2;
  CHECK(prints(enumerate_forms(events({"ei1"}), cfg)) == std::vector<std::string>{"ei1"});
}

TEST_CASE("one constant at bound four yields the pruned unary layer") {
  SearchConfig cfg;
  cfg.max_actions = 4;
  std::vector<std::string> got = prints(enumerate_forms(events({"ei1"}), cfg));
  CHECK(got.size() == 13);  // the constant plus twelve relation applications
  CHECK(std::count(got.begin(), got.end(), "ei1") == 1);
  CHECK(std::count(got.begin(), got.end(), "(before ei1)") == 1);
  CHECK(std::count(got.begin(), got.end(), "(equals ei1)") == 0);
}

TEST_CASE("pruning removes collapsing nestings the unpruned grammar keeps") {
  SearchConfig pruned;
  pruned.max_actions = 6;
  std::vector<std::string> on = prints(enumerate_forms(events({"ei1"}), pruned));
  CHECK(std::count(on.begin(), on.end(), "(before (before ei1))") == 0);
  CHECK(std::count(on.begin(), on.end(), "(before (after ei1))") == 1);

  SearchConfig open = pruned;
  open.pruning_enabled = false;
  std::vector<std::string> off = prints(enumerate_forms(events({"ei1"}), open));
  CHECK(std::count(off.begin(), off.end(), "(before (before ei1))") == 1);
  CHECK(std::count(off.begin(), off.end(), "(equals ei1)") == 1);
  CHECK(on.size() < off.size());
}

TEST_CASE("enumeration is duplicate-free, ordered by length, and canonical") {
  SearchConfig cfg;
  cfg.max_actions = 7;
  std::vector<LogicalForm> forms = enumerate_forms(events({"ei1", "ei2"}), cfg);
  std::set<std::string> distinct;
  int last_length = 0;
  for (const LogicalForm& f : forms) {
    CHECK(f.action_length() <= 7);
    CHECK(f.action_length() >= last_length);
    last_length = f.action_length();
    CHECK(canonical(f.root()));
    CHECK(distinct.insert(f.print()).second);
  }
  CHECK(distinct.size() == forms.size());
  CHECK(distinct.count("(intersection ei2 ei1)") == 1);  // "ei2" prints greater
  CHECK(distinct.count("(intersection ei1 ei2)") == 0);
  CHECK(distinct.count("(union ei1 ei1)") == 0);  // repeated argument, not canonical
}

TEST_CASE("the enumeration callback can stop early") {
  SearchConfig cfg;
  cfg.max_actions = 8;
  int seen = 0;
  EnumerationStats stats = enumerate_forms(events({"ei1"}), cfg, [&](const LogicalForm&) {
    return ++seen < 5;
  });
  CHECK(seen == 5);
  CHECK(stats.yielded == 5);
}

TEST_CASE("matching compares denotations against gold") {
  Denotation d;
  d.root = "r";
  d.relations["ei1"] = RelationSet({AllenRelation::Before, AllenRelation::Meets});
  d.relations["ei2"] = RelationSet{AllenRelation::After};

  GoldDenotation gold{{"ei2", RelationSet{AllenRelation::After}}};
  CHECK(matches(d, gold, MatchMode::Strict));

  gold["ei1"] = RelationSet{AllenRelation::Before};
  CHECK_FALSE(matches(d, gold, MatchMode::Strict));  // {before,meets} is not exact
  CHECK(matches(d, gold, MatchMode::Lax));

  Denotation inconsistent;
  inconsistent.status = ConsistencyStatus::Inconsistent;
  CHECK_FALSE(matches(inconsistent, gold, MatchMode::Strict));
  CHECK_FALSE(matches(inconsistent, GoldDenotation{}, MatchMode::Lax));
}

TEST_CASE("search recovers a directly constructible form") {
  ExecutionContext ctx;
  ctx.vocabulary = events({"ei1"});
  GoldDenotation gold{{"ei1", RelationSet{AllenRelation::Before}}};
  SearchConfig cfg;
  cfg.max_actions = 4;
  SearchResult result = search(ctx, gold, cfg);
  std::vector<std::string> got = prints(result.matches);
  CHECK(got == std::vector<std::string>{"(before ei1)"});
  CHECK(result.stats.verification_failures == 0);
  CHECK(result.stats.enumerated > 0);
  CHECK(result.stats.distinct_signatures > 0);
}

TEST_CASE("search finds the intersection pinning two events") {
  ExecutionContext ctx;
  ctx.vocabulary = events({"ei1", "ei2"});
  GoldDenotation gold{{"ei1", RelationSet{AllenRelation::Before}},
                      {"ei2", RelationSet{AllenRelation::After}}};
  SearchConfig cfg;
  cfg.max_actions = 9;
  SearchResult result = search(ctx, gold, cfg);
  std::vector<std::string> got = prints(result.matches);
  // Two independent singleton constraints need an intersection of two unary
  // applications; nothing shorter reaches both.
  CHECK(got == std::vector<std::string>{"(intersection (before ei1) (after ei2))"});
  CHECK(result.stats.verification_failures == 0);
}

TEST_CASE("search results arrive in serialization order up to max_results") {
  ExecutionContext ctx;
  ctx.vocabulary = events({"ei1"});
  GoldDenotation gold{{"ei1", RelationSet{AllenRelation::Before}}};
  SearchConfig cfg;
  cfg.max_actions = 8;
  SearchResult full = search(ctx, gold, cfg);
  CHECK(full.matches.size() > 1);
  CHECK(std::is_sorted(full.matches.begin(), full.matches.end(),
                       [](const LogicalForm& a, const LogicalForm& b) { return a < b; }));

  SearchConfig capped = cfg;
  capped.max_results = 2;
  SearchResult head = search(ctx, gold, capped);
  REQUIRE(head.matches.size() == 2);
  CHECK(head.matches[0] == full.matches[0]);
  CHECK(head.matches[1] == full.matches[1]);
}

TEST_CASE("unpruned search equals the brute-force filter") {
  ExecutionContext ctx;
  ctx.vocabulary = events({"ei1", "ei2"});
  GoldDenotation gold{{"ei1", RelationSet{AllenRelation::Before}}};
  SearchConfig cfg;
  cfg.max_actions = 6;
  cfg.pruning_enabled = false;

  std::vector<std::string> filtered;
  for (const LogicalForm& lf : enumerate_forms(ctx.vocabulary, cfg)) {
    if (matches(execute(lf, ctx), gold, cfg.match_mode)) filtered.push_back(lf.print());
  }
  std::sort(filtered.begin(), filtered.end());
  CHECK(prints(search(ctx, gold, cfg).matches) == filtered);
}

TEST_CASE("search validates its inputs") {
  ExecutionContext ctx;
  ctx.vocabulary = events({"ei1"});
  GoldDenotation gold{{"ei1", RelationSet{AllenRelation::Before}}};
  SearchConfig cfg;

  ExecutionContext empty_ctx;
  CHECK_THROWS_AS(search(empty_ctx, gold, cfg), std::invalid_argument);

  GoldDenotation unknown{{"ei9", RelationSet{AllenRelation::Before}}};
  CHECK_THROWS_AS(search(ctx, unknown, cfg), std::invalid_argument);

  GoldDenotation wide{{"ei1", RelationSet({AllenRelation::Before, AllenRelation::Meets})}};
  CHECK_THROWS_AS(search(ctx, wide, cfg), std::invalid_argument);

  SearchConfig tiny;
  tiny.max_actions = 1;
  CHECK_THROWS_AS(search(ctx, gold, tiny), std::invalid_argument);
}

}  // TEST_SUITE
