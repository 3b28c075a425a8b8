#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "support/generators.hpp"
#include "tempra/algebra.hpp"

using namespace tempra;

namespace {

const AllenRelation kAll[] = {
    AllenRelation::Before,       AllenRelation::After,      AllenRelation::Meets,
    AllenRelation::MetBy,        AllenRelation::Overlaps,   AllenRelation::OverlappedBy,
    AllenRelation::Starts,       AllenRelation::StartedBy,  AllenRelation::During,
    AllenRelation::Contains,     AllenRelation::Finishes,   AllenRelation::FinishedBy,
    AllenRelation::Equals,
};

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("thirteen relations with unique involutive converses") {
  std::set<AllenRelation> seen;
  for (AllenRelation r : kAll) {
    CHECK(converse(converse(r)) == r);
    seen.insert(converse(r));
  }
  CHECK(seen.size() == 13);
  CHECK(converse(AllenRelation::Equals) == AllenRelation::Equals);
  CHECK(converse(AllenRelation::Before) == AllenRelation::After);
  CHECK(converse(AllenRelation::Meets) == AllenRelation::MetBy);
  CHECK(converse(AllenRelation::Starts) == AllenRelation::StartedBy);
  CHECK(converse(AllenRelation::During) == AllenRelation::Contains);
  CHECK(converse(AllenRelation::Finishes) == AllenRelation::FinishedBy);
}

TEST_CASE("relation names round trip") {
  for (AllenRelation r : kAll) {
    CHECK(relation_from_string(to_string(r)) == r);
  }
  CHECK_THROWS_AS(relation_from_string("sideways"), std::invalid_argument);
}

TEST_CASE("relate decides endpoint configurations") {
  CHECK(relate({0, 1}, {2, 3}) == AllenRelation::Before);
  CHECK(relate({0, 2}, {0, 2}) == AllenRelation::Equals);
  CHECK(relate({1, 3}, {0, 4}) == AllenRelation::During);
  CHECK(relate({0, 2}, {2, 4}) == AllenRelation::Meets);
  CHECK(relate({0, 3}, {1, 4}) == AllenRelation::Overlaps);
  CHECK(relate({0, 2}, {0, 4}) == AllenRelation::Starts);
  CHECK(relate({1, 4}, {0, 4}) == AllenRelation::Finishes);
  CHECK_THROWS_AS(PointInterval(3, 3), std::invalid_argument);
}

TEST_CASE("relate is total and exclusive over the endpoint universe") {
  const auto& universe = oracle_universe();
  CHECK(universe.size() == 28);  // C(8,2) proper intervals over 8 points
  int histogram[13] = {};
  for (const auto& a : universe) {
    for (const auto& b : universe) {
      AllenRelation r = relate(a, b);  // returning at all means exactly one holds
      ++histogram[static_cast<int>(r)];
      CHECK(relate(b, a) == converse(r));
    }
  }
  for (int count : histogram) CHECK(count > 0);
}

TEST_CASE("relation set operations and serialization") {
  RelationSet s{AllenRelation::Meets, AllenRelation::Before};
  CHECK(s.size() == 2);
  CHECK(s.contains(AllenRelation::Meets));
  CHECK_FALSE(s.contains(AllenRelation::After));
  CHECK_FALSE(s.is_singleton());
  CHECK(s.to_string() == "before,meets");
  CHECK(RelationSet::from_string("before,meets") == s);
  CHECK(RelationSet::from_string("") == RelationSet::none());
  CHECK_THROWS_AS(RelationSet::from_string("before,onward"), std::invalid_argument);

  RelationSet single{AllenRelation::During};
  CHECK(single.is_singleton());
  CHECK(single.single() == AllenRelation::During);
  CHECK_THROWS_AS(s.single(), std::logic_error);

  CHECK(RelationSet::all().size() == 13);
  CHECK(RelationSet::all().full());
  CHECK(RelationSet::none().empty());
  CHECK((s & RelationSet{AllenRelation::Meets}) == RelationSet{AllenRelation::Meets});
  CHECK((s | RelationSet{AllenRelation::After}).size() == 3);
  CHECK(s.is_subset_of(RelationSet::all()));
}

TEST_CASE("set converse is elementwise and involutive") {
  CHECK(RelationSet{AllenRelation::Before}.converse() == RelationSet{AllenRelation::After});
  CHECK(RelationSet{AllenRelation::Equals}.converse() == RelationSet{AllenRelation::Equals});
  CHECK(RelationSet::all().converse() == RelationSet::all());
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    RelationSet s = testgen::random_relation_set(rng, true);
    CHECK(s.converse().converse() == s);
  }
}

TEST_CASE("composition of pinned pairs") {
  RelationSet before{AllenRelation::Before};
  CHECK(compose(before, before) == before);
  CHECK(compose(RelationSet{AllenRelation::Equals}, RelationSet{AllenRelation::During}) ==
        RelationSet{AllenRelation::During});
  CHECK(compose(RelationSet{AllenRelation::Overlaps}, RelationSet{AllenRelation::Overlaps}) ==
        RelationSet({AllenRelation::Before, AllenRelation::Meets, AllenRelation::Overlaps}));
  // Two intervals meeting a shared third from opposite sides end together;
  // the endpoint oracle pins the finishes family plus equals.
  RelationSet meets_then_met_by =
      RelationSet({AllenRelation::Equals, AllenRelation::FinishedBy, AllenRelation::Finishes});
  CHECK(compose_basic(AllenRelation::Meets, AllenRelation::MetBy) == meets_then_met_by);
  CHECK(compose_oracle(AllenRelation::Meets, AllenRelation::MetBy) == meets_then_met_by);
}

TEST_CASE("composition with the empty and full sets") {
  for (AllenRelation r : kAll) {
    RelationSet s{r};
    CHECK(compose(RelationSet::none(), s) == RelationSet::none());
    CHECK(compose(s, RelationSet::none()) == RelationSet::none());
    CHECK(compose(RelationSet::all(), s) == RelationSet::all());
    CHECK(compose(s, RelationSet::all()) == RelationSet::all());
  }
}

TEST_CASE("equals is the composition identity") {
  RelationSet equals{AllenRelation::Equals};
  for (AllenRelation r : kAll) {
    CHECK(compose(equals, RelationSet{r}) == RelationSet{r});
    CHECK(compose(RelationSet{r}, equals) == RelationSet{r});
  }
  std::mt19937 rng(12);
  for (int i = 0; i < 200; ++i) {
    RelationSet s = testgen::random_relation_set(rng);
    CHECK(compose(equals, s) == s);
    CHECK(compose(s, equals) == s);
  }
}

TEST_CASE("converse of a composition swaps and converses the factors") {
  for (AllenRelation a : kAll) {
    for (AllenRelation b : kAll) {
      CHECK(compose_basic(a, b).converse() ==
            compose(RelationSet{converse(b)}, RelationSet{converse(a)}));
    }
  }
}

TEST_CASE("composition is monotone in both arguments") {
  std::mt19937 rng(13);
  for (int i = 0; i < 500; ++i) {
    RelationSet r1 = testgen::random_relation_set(rng);
    RelationSet r2 = testgen::random_relation_set(rng);
    RelationSet s1 = testgen::random_subset(rng, r1);
    RelationSet s2 = testgen::random_subset(rng, r2);
    CHECK(compose(s1, s2).is_subset_of(compose(r1, r2)));
  }
}

TEST_CASE("table agrees with the endpoint oracle on sampled pairs") {
  // The exhaustive 169-pair sweep runs in the acceptance binary; spot-check
  // a diagonal and an off-diagonal band here.
  for (AllenRelation a : kAll) {
    CHECK(compose(RelationSet{a}, RelationSet{a}) == compose_oracle(a, a));
    CHECK(compose(RelationSet{a}, RelationSet{converse(a)}) == compose_oracle(a, converse(a)));
  }
}

}  // TEST_SUITE
