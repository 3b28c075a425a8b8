#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tempra/dpd.hpp"
#include "tempra/network.hpp"

namespace tempra {

/// Raised on structurally broken XML (unterminated tags or attribute values).
/// Recoverable irregularities become document warnings instead.
class TimeMLError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The closed TLINK relation vocabulary.
enum class TLinkRelType : std::uint8_t {
  Before, After, IBefore, IAfter, Includes, IsIncluded, During, DuringInv,
  Simultaneous, Identity, Begins, BegunBy, Ends, EndedBy,
};

std::string_view to_string(TLinkRelType t);

/// Parses the annotation spelling ("BEFORE", "DURING_INV", ...).
/// Throws TimeMLError on an unknown relType, naming it.
TLinkRelType reltype_from_string(std::string_view s);

/// The Allen relation for a TLINK relType, reading source relType target as
/// source <relation> target. TimeML names 14 relTypes for 13 relations:
/// IDENTITY and SIMULTANEOUS both map to equals, DURING to during and
/// DURING_INV to contains.
AllenRelation map_reltype(TLinkRelType t);

struct TimeMLEvent {
  std::string eid;
  std::string text;
  std::string event_class;
};

struct EventInstance {
  std::string eiid;
  std::string eid;
  std::map<std::string, std::string> attributes;  // tense, aspect, ... kept opaque
};

struct Timex {
  std::string tid;
  std::string text;
  std::string type;
  std::string value;
};

struct TLink {
  std::string lid;
  std::string source;  // eiid or tid
  std::string target;  // eiid or tid
  TLinkRelType rel_type = TLinkRelType::Before;
};

struct TimeMLDocument {
  std::string doc_id;
  std::string text;
  std::vector<TimeMLEvent> events;
  std::vector<EventInstance> instances;
  std::vector<Timex> timexes;
  std::vector<TLink> tlinks;
  std::vector<std::string> warnings;  // dropped links, unknown relTypes, ...
};

/// Extracts EVENT, MAKEINSTANCE, TIMEX3, TLINK, and DOCID from a
/// TimeML-family document. Unknown elements and attributes are ignored;
/// TLINK endpoints are resolved to eiids/tids (an event id resolves through
/// its sole instance), and unresolvable links are dropped with a warning.
/// Throws TimeMLError on malformed XML.
TimeMLDocument parse_document(std::string_view xml);

struct GoldNetworkResult {
  ConstraintNetwork network;
  /// Index into tlinks of the assertion that first exposed an inconsistency;
  /// set iff the network status is Inconsistent.
  std::optional<std::size_t> first_conflict;
};

/// One Event node per eiid and one Timex node per tid, with each TLink's
/// mapped relation asserted as a singleton constraint in annotation order,
/// then propagated. Inconsistent gold is returned, not thrown.
GoldNetworkResult gold_network(const TimeMLDocument& doc);

/// The anchor's propagated relation to every other node, keeping singleton
/// entries only. Throws std::invalid_argument on an unknown anchor and
/// std::runtime_error on inconsistent gold (repair the annotation closure
/// before querying denotations).
GoldDenotation gold_denotation(const TimeMLDocument& doc, const std::string& anchor);

struct CorpusDocument {
  std::string path;  // source file path; empty for in-memory documents
  TimeMLDocument document;
  ConsistencyStatus gold_status = ConsistencyStatus::Consistent;
  std::optional<std::size_t> first_conflict;
};

struct ManifestEntry {
  std::string doc_id;
  std::size_t events = 0;
  std::size_t instances = 0;
  std::size_t timexes = 0;
  std::size_t links = 0;
  std::size_t warnings = 0;
  ConsistencyStatus gold_status = ConsistencyStatus::Consistent;
};

struct CorpusManifest {
  std::size_t documents = 0;
  std::size_t events = 0;
  std::size_t instances = 0;
  std::size_t timexes = 0;
  std::size_t links = 0;
  std::size_t warnings = 0;
  std::size_t consistent = 0;
  std::size_t inconsistent = 0;
  std::vector<ManifestEntry> entries;  // in document order
};

struct Corpus {
  std::vector<CorpusDocument> documents;
  CorpusManifest manifest;
};

/// Reads every .tml file under path (a directory, scanned in sorted filename
/// order, or a single file) and builds gold networks and the manifest.
/// Documents without a DOCID take their filename stem as doc_id.
/// Throws TimeMLError if path does not exist or a file is malformed.
Corpus ingest_corpus(const std::string& path);

/// Builds a corpus from already-parsed documents (used by tests).
Corpus corpus_from_documents(std::vector<TimeMLDocument> documents);

/// Manifest as a JSON document (totals plus per-document entries).
std::string manifest_to_json(const CorpusManifest& manifest, int indent = 2);

}  // namespace tempra
