#include <doctest.h>

#include <json.hpp>
#include <string>

#include "tempra/timeml.hpp"

using namespace tempra;

namespace {

constexpr const char* kCorpusDir = TEMPRA_FIXTURES_DIR "/corpus";

const char* kMinimalDoc = R"(<?xml version="1.0" ?>
<TimeML>
<DOCID>mini</DOCID>
<TEXT>Troops <EVENT eid="e1" class="OCCURRENCE">advanced</EVENT> at dawn.</TEXT>
<MAKEINSTANCE eiid="ei1" eventID="e1" tense="PAST"/>
</TimeML>)";

const char* kLinkedDoc = R"(<TimeML>
<DOCID>duo</DOCID>
<TEXT><EVENT eid="e1" class="OCCURRENCE">fell</EVENT> and <EVENT eid="e2" class="OCCURRENCE">rose</EVENT></TEXT>
<MAKEINSTANCE eiid="ei1" eventID="e1"/>
<MAKEINSTANCE eiid="ei2" eventID="e2"/>
<TLINK lid="l1" eventInstanceID="ei1" relatedToEventInstance="ei2" relType="BEFORE"/>
</TimeML>)";

}  // namespace

TEST_SUITE("timeml") {

TEST_CASE("the closed link vocabulary round trips") {
  const TLinkRelType all[] = {
      TLinkRelType::Before,     TLinkRelType::After,      TLinkRelType::IBefore,
      TLinkRelType::IAfter,     TLinkRelType::Includes,   TLinkRelType::IsIncluded,
      TLinkRelType::During,     TLinkRelType::DuringInv,  TLinkRelType::Simultaneous,
      TLinkRelType::Identity,   TLinkRelType::Begins,     TLinkRelType::BegunBy,
      TLinkRelType::Ends,       TLinkRelType::EndedBy,
  };
  for (TLinkRelType t : all) CHECK(reltype_from_string(to_string(t)) == t);
  CHECK_THROWS_WITH_AS(reltype_from_string("OVERLAPPING"), doctest::Contains("OVERLAPPING"),
                       TimeMLError);
}

TEST_CASE("fourteen link names map onto thirteen relations") {
  CHECK(map_reltype(TLinkRelType::Before) == AllenRelation::Before);
  CHECK(map_reltype(TLinkRelType::After) == AllenRelation::After);
  CHECK(map_reltype(TLinkRelType::IBefore) == AllenRelation::Meets);
  CHECK(map_reltype(TLinkRelType::IAfter) == AllenRelation::MetBy);
  CHECK(map_reltype(TLinkRelType::Includes) == AllenRelation::Contains);
  CHECK(map_reltype(TLinkRelType::IsIncluded) == AllenRelation::During);
  CHECK(map_reltype(TLinkRelType::During) == AllenRelation::During);
  CHECK(map_reltype(TLinkRelType::DuringInv) == AllenRelation::Contains);
  CHECK(map_reltype(TLinkRelType::Simultaneous) == AllenRelation::Equals);
  CHECK(map_reltype(TLinkRelType::Identity) == AllenRelation::Equals);
  CHECK(map_reltype(TLinkRelType::Begins) == AllenRelation::Starts);
  CHECK(map_reltype(TLinkRelType::BegunBy) == AllenRelation::StartedBy);
  CHECK(map_reltype(TLinkRelType::Ends) == AllenRelation::Finishes);
  CHECK(map_reltype(TLinkRelType::EndedBy) == AllenRelation::FinishedBy);
}

TEST_CASE("the mapping's image is closed under converse") {
  CHECK(map_reltype(TLinkRelType::After) == converse(map_reltype(TLinkRelType::Before)));
  CHECK(map_reltype(TLinkRelType::IAfter) == converse(map_reltype(TLinkRelType::IBefore)));
  CHECK(map_reltype(TLinkRelType::IsIncluded) == converse(map_reltype(TLinkRelType::Includes)));
  CHECK(map_reltype(TLinkRelType::DuringInv) == converse(map_reltype(TLinkRelType::During)));
  CHECK(map_reltype(TLinkRelType::BegunBy) == converse(map_reltype(TLinkRelType::Begins)));
  CHECK(map_reltype(TLinkRelType::EndedBy) == converse(map_reltype(TLinkRelType::Ends)));
  CHECK(map_reltype(TLinkRelType::Identity) == converse(map_reltype(TLinkRelType::Identity)));
}

TEST_CASE("minimal documents parse to bare inventories") {
  TimeMLDocument doc = parse_document(kMinimalDoc);
  CHECK(doc.doc_id == "mini");
  REQUIRE(doc.events.size() == 1);
  CHECK(doc.events[0].eid == "e1");
  CHECK(doc.events[0].text == "advanced");
  REQUIRE(doc.instances.size() == 1);
  CHECK(doc.instances[0].eiid == "ei1");
  CHECK(doc.instances[0].eid == "e1");
  CHECK(doc.timexes.empty());
  CHECK(doc.tlinks.empty());
  CHECK(doc.warnings.empty());
  CHECK(doc.text.find("advanced") != std::string::npos);
}

TEST_CASE("links resolve endpoints and keep their reltype") {
  TimeMLDocument doc = parse_document(kLinkedDoc);
  REQUIRE(doc.tlinks.size() == 1);
  CHECK(doc.tlinks[0].lid == "l1");
  CHECK(doc.tlinks[0].source == "ei1");
  CHECK(doc.tlinks[0].target == "ei2");
  CHECK(doc.tlinks[0].rel_type == TLinkRelType::Before);
}

TEST_CASE("event ids resolve through their sole instance") {
  std::string xml = R"(<TimeML><DOCID>d</DOCID>
<TEXT><EVENT eid="e1" class="X">a</EVENT><EVENT eid="e2" class="X">b</EVENT></TEXT>
<MAKEINSTANCE eiid="ei1" eventID="e1"/>
<MAKEINSTANCE eiid="ei2" eventID="e2"/>
<TLINK lid="l1" eventID="e1" relatedToEventInstance="ei2" relType="AFTER"/>
</TimeML>)";
  TimeMLDocument doc = parse_document(xml);
  REQUIRE(doc.tlinks.size() == 1);
  CHECK(doc.tlinks[0].source == "ei1");
}

TEST_CASE("unresolvable links drop with a warning") {
  std::string xml = R"(<TimeML><DOCID>d</DOCID>
<TEXT><EVENT eid="e1" class="X">a</EVENT></TEXT>
<MAKEINSTANCE eiid="ei1" eventID="e1"/>
<TLINK lid="l1" eventInstanceID="ei1" relatedToEventInstance="ei9" relType="BEFORE"/>
</TimeML>)";
  TimeMLDocument doc = parse_document(xml);
  CHECK(doc.tlinks.empty());
  REQUIRE(doc.warnings.size() == 1);
  CHECK(doc.warnings[0].find("ei9") != std::string::npos);
}

TEST_CASE("character entities decode inside text and attributes") {
  std::string xml = R"(<TimeML><DOCID>d</DOCID>
<TEXT>Smith &amp; Jones <EVENT eid="e1" class="X">met</EVENT></TEXT>
<MAKEINSTANCE eiid="ei1" eventID="e1"/>
<TIMEX3 tid="t1" type="DATE" value="P1D">a &lt;day&gt;</TIMEX3>
</TimeML>)";
  TimeMLDocument doc = parse_document(xml);
  CHECK(doc.text.find("Smith & Jones") != std::string::npos);
  REQUIRE(doc.timexes.size() == 1);
  CHECK(doc.timexes[0].text == "a <day>");
}

TEST_CASE("malformed markup is a hard error") {
  CHECK_THROWS_AS(parse_document("<TimeML><EVENT eid=\"e1\" "), TimeMLError);
  CHECK_THROWS_AS(parse_document("<TimeML><EVENT eid=\"unclosed></TimeML>"), TimeMLError);
}

TEST_CASE("gold networks propagate annotated chains") {
  std::string xml = R"(<TimeML><DOCID>d</DOCID>
<TEXT><EVENT eid="e1" class="X">a</EVENT><EVENT eid="e2" class="X">b</EVENT><EVENT eid="e3" class="X">c</EVENT></TEXT>
<MAKEINSTANCE eiid="ei1" eventID="e1"/>
<MAKEINSTANCE eiid="ei2" eventID="e2"/>
<MAKEINSTANCE eiid="ei3" eventID="e3"/>
<TLINK lid="l1" eventInstanceID="ei1" relatedToEventInstance="ei2" relType="BEFORE"/>
<TLINK lid="l2" eventInstanceID="ei2" relatedToEventInstance="ei3" relType="BEFORE"/>
</TimeML>)";
  TimeMLDocument doc = parse_document(xml);
  GoldNetworkResult gold = gold_network(doc);
  CHECK(gold.network.status() == ConsistencyStatus::Consistent);
  CHECK_FALSE(gold.first_conflict.has_value());
  CHECK(gold.network.relation_between(gold.network.node_by_label("ei1"),
                                      gold.network.node_by_label("ei3")) ==
        RelationSet{AllenRelation::Before});

  GoldDenotation d = gold_denotation(doc, "ei1");
  CHECK(d == GoldDenotation{{"ei2", RelationSet{AllenRelation::Before}},
                            {"ei3", RelationSet{AllenRelation::Before}}});
  CHECK_THROWS_AS(gold_denotation(doc, "ei9"), std::invalid_argument);
}

TEST_CASE("conflicting gold is flagged with the exposing link") {
  std::string xml = R"(<TimeML><DOCID>d</DOCID>
<TEXT><EVENT eid="e1" class="X">a</EVENT><EVENT eid="e2" class="X">b</EVENT></TEXT>
<MAKEINSTANCE eiid="ei1" eventID="e1"/>
<MAKEINSTANCE eiid="ei2" eventID="e2"/>
<TLINK lid="l1" eventInstanceID="ei1" relatedToEventInstance="ei2" relType="BEFORE"/>
<TLINK lid="l2" eventInstanceID="ei2" relatedToEventInstance="ei1" relType="BEFORE"/>
</TimeML>)";
  TimeMLDocument doc = parse_document(xml);
  GoldNetworkResult gold = gold_network(doc);
  CHECK(gold.network.status() == ConsistencyStatus::Inconsistent);
  CHECK(gold.first_conflict == std::size_t{1});
  CHECK_THROWS_AS(gold_denotation(doc, "ei1"), std::runtime_error);
}

TEST_CASE("unlinked anchors have empty gold denotations") {
  std::string xml = R"(<TimeML><DOCID>d</DOCID>
<TEXT><EVENT eid="e1" class="X">a</EVENT><EVENT eid="e2" class="X">b</EVENT></TEXT>
<MAKEINSTANCE eiid="ei1" eventID="e1"/>
<MAKEINSTANCE eiid="ei2" eventID="e2"/>
</TimeML>)";
  CHECK(gold_denotation(parse_document(xml), "ei1").empty());
}

TEST_CASE("corpus ingestion matches the recorded manifest") {
  Corpus corpus = ingest_corpus(kCorpusDir);
  REQUIRE(corpus.documents.size() == 4);
  CHECK(corpus.documents[0].document.doc_id == "fx01");
  CHECK(corpus.documents[3].document.doc_id == "fx04");
  CHECK(corpus.documents[2].gold_status == ConsistencyStatus::Inconsistent);

  const CorpusManifest& m = corpus.manifest;
  CHECK(m.documents == 4);
  CHECK(m.events == 31);
  CHECK(m.instances == 31);
  CHECK(m.timexes == 4);
  CHECK(m.links == 19);
  CHECK(m.warnings == 1);
  CHECK(m.consistent == 3);
  CHECK(m.inconsistent == 1);
  REQUIRE(m.entries.size() == 4);
  CHECK(m.entries[0].links == 14);
  CHECK(m.entries[1].doc_id == "fx02");

  nlohmann::json rendered = nlohmann::json::parse(manifest_to_json(m));
  CHECK(rendered["documents"] == 4);
  CHECK(rendered["per_document"][2]["status"] == "inconsistent");
}

TEST_CASE("single files ingest with filename fallback ids") {
  Corpus corpus = ingest_corpus(std::string(kCorpusDir) + "/fx02_chain.tml");
  REQUIRE(corpus.documents.size() == 1);
  CHECK(corpus.documents[0].document.doc_id == "fx02");
  CHECK(corpus.manifest.links == 2);
  CHECK_THROWS_AS(ingest_corpus(std::string(kCorpusDir) + "/absent.tml"), TimeMLError);

  TimeMLDocument bare;
  bare.text = "plain";
  Corpus built = corpus_from_documents({bare});
  CHECK(built.manifest.documents == 1);
}

}  // TEST_SUITE
