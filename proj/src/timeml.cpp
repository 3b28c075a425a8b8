#include "tempra/timeml.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tempra {

namespace {

constexpr std::string_view kRelTypeNames[] = {
    "BEFORE", "AFTER", "IBEFORE", "IAFTER", "INCLUDES", "IS_INCLUDED", "DURING",
    "DURING_INV", "SIMULTANEOUS", "IDENTITY", "BEGINS", "BEGUN_BY", "ENDS", "ENDED_BY",
};

constexpr AllenRelation kRelTypeImage[] = {
    AllenRelation::Before,     AllenRelation::After,    AllenRelation::Meets,
    AllenRelation::MetBy,      AllenRelation::Contains, AllenRelation::During,
    AllenRelation::During,     AllenRelation::Contains, AllenRelation::Equals,
    AllenRelation::Equals,     AllenRelation::Starts,   AllenRelation::StartedBy,
    AllenRelation::Finishes,   AllenRelation::FinishedBy,
};

}  // namespace

std::string_view to_string(TLinkRelType t) { return kRelTypeNames[static_cast<int>(t)]; }

TLinkRelType reltype_from_string(std::string_view s) {
  for (int i = 0; i < 14; ++i) {
    if (kRelTypeNames[i] == s) return static_cast<TLinkRelType>(i);
  }
  throw TimeMLError("unknown TLINK relType '" + std::string(s) + "'");
}

AllenRelation map_reltype(TLinkRelType t) { return kRelTypeImage[static_cast<int>(t)]; }

// ---------------------------------------------------------------------------
// Tolerant XML scanning

namespace {

struct Tag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool closing = false;       // </name>
  bool self_closing = false;  // <name ... />
};

std::string decode_entities(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '&') {
      out += raw[i++];
      continue;
    }
    const std::size_t end = raw.find(';', i);
    if (end == std::string_view::npos || end - i > 8) {
      out += raw[i++];  // stray ampersand, keep literally
      continue;
    }
    const std::string_view name = raw.substr(i + 1, end - i - 1);
    if (name == "amp") out += '&';
    else if (name == "lt") out += '<';
    else if (name == "gt") out += '>';
    else if (name == "quot") out += '"';
    else if (name == "apos") out += '\'';
    else if (!name.empty() && name[0] == '#') {
      const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      const long code = std::strtol(std::string(name.substr(hex ? 2 : 1)).c_str(), nullptr,
                                    hex ? 16 : 10);
      if (code > 0 && code < 128) out += static_cast<char>(code);
      else out += '?';  // non-ASCII references are out of scope
    } else {
      out += raw.substr(i, end - i + 1);  // unknown entity, keep literally
    }
    i = end + 1;
  }
  return out;
}

/// Splits a document into tags and decoded character data. Comments,
/// declarations, and processing instructions are skipped.
class XmlScanner {
 public:
  explicit XmlScanner(std::string_view text) : text_(text) {}

  /// Advances to the next tag, appending the character data crossed over to
  /// chars. Returns false at end of input.
  bool next(Tag& tag, std::string& chars) {
    while (pos_ < text_.size()) {
      const std::size_t lt = text_.find('<', pos_);
      if (lt == std::string_view::npos) {
        chars += decode_entities(text_.substr(pos_));
        pos_ = text_.size();
        return false;
      }
      chars += decode_entities(text_.substr(pos_, lt - pos_));
      pos_ = lt;

      if (starts_with("<!--")) {
        skip_until("-->", "unterminated comment");
        continue;
      }
      if (starts_with("<![CDATA[")) {
        const std::size_t end = text_.find("]]>", pos_ + 9);
        if (end == std::string_view::npos) throw TimeMLError("unterminated CDATA section");
        chars += text_.substr(pos_ + 9, end - pos_ - 9);
        pos_ = end + 3;
        continue;
      }
      if (starts_with("<!")) {
        skip_until(">", "unterminated declaration");
        continue;
      }
      if (starts_with("<?")) {
        skip_until("?>", "unterminated processing instruction");
        continue;
      }
      parse_tag(tag);
      return true;
    }
    return false;
  }

 private:
  bool starts_with(std::string_view prefix) const {
    return text_.substr(pos_, prefix.size()) == prefix;
  }

  void skip_until(std::string_view marker, const char* error) {
    const std::size_t end = text_.find(marker, pos_);
    if (end == std::string_view::npos) throw TimeMLError(error);
    pos_ = end + marker.size();
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
           c == '.';
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void parse_tag(Tag& tag) {
    tag = Tag{};
    ++pos_;  // consume '<'
    if (pos_ < text_.size() && text_[pos_] == '/') {
      tag.closing = true;
      ++pos_;
    }
    const std::size_t name_start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    tag.name = std::string(text_.substr(name_start, pos_ - name_start));
    if (tag.name.empty()) throw TimeMLError("malformed tag: missing element name");

    while (true) {
      skip_space();
      if (pos_ >= text_.size()) throw TimeMLError("unterminated tag <" + tag.name);
      if (text_[pos_] == '>') {
        ++pos_;
        return;
      }
      if (text_[pos_] == '/') {
        ++pos_;
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != '>') {
          throw TimeMLError("malformed self-closing tag <" + tag.name);
        }
        ++pos_;
        tag.self_closing = true;
        return;
      }
      parse_attribute(tag);
    }
  }

  void parse_attribute(Tag& tag) {
    const std::size_t name_start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(name_start, pos_ - name_start));
    if (name.empty()) throw TimeMLError("malformed attribute in <" + tag.name);
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '=') {
      tag.attrs.emplace(std::move(name), "");  // bare attribute, tolerated
      return;
    }
    ++pos_;
    skip_space();
    if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\'')) {
      throw TimeMLError("attribute '" + name + "' in <" + tag.name + " has no quoted value");
    }
    const char quote = text_[pos_++];
    const std::size_t value_start = pos_;
    const std::size_t end = text_.find(quote, pos_);
    if (end == std::string_view::npos) {
      throw TimeMLError("unterminated value for attribute '" + name + "' in <" + tag.name);
    }
    tag.attrs.emplace(std::move(name), decode_entities(text_.substr(value_start, end - value_start)));
    pos_ = end + 1;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string attr_or(const Tag& tag, const std::string& name, std::string fallback = "") {
  const auto it = tag.attrs.find(name);
  return it == tag.attrs.end() ? std::move(fallback) : it->second;
}

/// Raw TLINK attributes, resolved after the whole document is scanned so
/// MAKEINSTANCE order does not matter.
struct RawLink {
  std::string lid;
  std::string source_instance, source_time, source_event;
  std::string target_instance, target_time, target_event;
  std::string rel_type;
};

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

TimeMLDocument parse_document(std::string_view xml) {
  TimeMLDocument doc;
  std::vector<RawLink> raw_links;

  // Open span-capturing elements; character data feeds every open capture.
  struct Capture {
    enum class Kind : std::uint8_t { Event, Timex, Text, DocId } kind;
    std::size_t index;  // events/timexes index
    std::string text;   // Text/DocId accumulation
  };
  std::vector<Capture> captures;
  std::string all_text;
  std::string text_element;
  bool saw_text_element = false;

  XmlScanner scanner(xml);
  Tag tag;
  std::string chars;
  bool more = true;
  while (more) {
    chars.clear();
    more = scanner.next(tag, chars);
    if (!chars.empty()) {
      all_text += chars;
      for (Capture& c : captures) {
        switch (c.kind) {
          case Capture::Kind::Event: doc.events[c.index].text += chars; break;
          case Capture::Kind::Timex: doc.timexes[c.index].text += chars; break;
          case Capture::Kind::Text: text_element += chars; break;
          case Capture::Kind::DocId: c.text += chars; break;
        }
      }
    }
    if (!more) break;

    if (tag.closing) {
      for (std::size_t i = captures.size(); i-- > 0;) {
        const Capture& c = captures[i];
        const bool matches =
            (c.kind == Capture::Kind::Event && tag.name == "EVENT") ||
            (c.kind == Capture::Kind::Timex && tag.name == "TIMEX3") ||
            (c.kind == Capture::Kind::Text && tag.name == "TEXT") ||
            (c.kind == Capture::Kind::DocId && tag.name == "DOCID");
        if (!matches) continue;
        if (c.kind == Capture::Kind::DocId) doc.doc_id = trimmed(c.text);
        captures.erase(captures.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }
      continue;
    }

    if (tag.name == "EVENT") {
      TimeMLEvent ev;
      ev.eid = attr_or(tag, "eid");
      ev.event_class = attr_or(tag, "class");
      doc.events.push_back(std::move(ev));
      if (!tag.self_closing) {
        captures.push_back(Capture{Capture::Kind::Event, doc.events.size() - 1, ""});
      }
    } else if (tag.name == "TIMEX3") {
      Timex tx;
      tx.tid = attr_or(tag, "tid");
      tx.type = attr_or(tag, "type");
      tx.value = attr_or(tag, "value");
      doc.timexes.push_back(std::move(tx));
      if (!tag.self_closing) {
        captures.push_back(Capture{Capture::Kind::Timex, doc.timexes.size() - 1, ""});
      }
    } else if (tag.name == "MAKEINSTANCE") {
      EventInstance inst;
      inst.eiid = attr_or(tag, "eiid");
      inst.eid = attr_or(tag, "eventID");
      for (const auto& [name, value] : tag.attrs) {
        if (name != "eiid" && name != "eventID") inst.attributes.emplace(name, value);
      }
      if (inst.eiid.empty() || inst.eid.empty()) {
        doc.warnings.push_back("MAKEINSTANCE missing eiid or eventID, skipped");
      } else {
        doc.instances.push_back(std::move(inst));
      }
    } else if (tag.name == "TLINK") {
      RawLink link;
      link.lid = attr_or(tag, "lid");
      link.source_instance = attr_or(tag, "eventInstanceID");
      link.source_time = attr_or(tag, "timeID");
      link.source_event = attr_or(tag, "eventID");
      link.target_instance = attr_or(tag, "relatedToEventInstance");
      link.target_time = attr_or(tag, "relatedToTime");
      link.target_event = attr_or(tag, "relatedToEvent");
      link.rel_type = attr_or(tag, "relType");
      raw_links.push_back(std::move(link));
    } else if (tag.name == "TEXT" && !tag.self_closing) {
      saw_text_element = true;
      captures.push_back(Capture{Capture::Kind::Text, 0, ""});
    } else if (tag.name == "DOCID" && !tag.self_closing) {
      captures.push_back(Capture{Capture::Kind::DocId, 0, ""});
    }
  }

  doc.text = saw_text_element ? trimmed(text_element) : trimmed(all_text);

  // Endpoint resolution. An eid resolves through its sole instance.
  std::map<std::string, std::vector<std::string>> instances_of;
  std::map<std::string, bool> known;
  for (const EventInstance& inst : doc.instances) {
    instances_of[inst.eid].push_back(inst.eiid);
    known[inst.eiid] = true;
  }
  for (const Timex& tx : doc.timexes) known[tx.tid] = true;

  const auto resolve = [&](const RawLink& link, bool source) -> std::optional<std::string> {
    const std::string& instance = source ? link.source_instance : link.target_instance;
    const std::string& time = source ? link.source_time : link.target_time;
    const std::string& event = source ? link.source_event : link.target_event;
    const char* side = source ? "source" : "target";
    std::string id = !instance.empty() ? instance : time;
    if (id.empty() && !event.empty()) {
      const auto it = instances_of.find(event);
      if (it == instances_of.end() || it->second.size() != 1) {
        doc.warnings.push_back("TLINK " + link.lid + ": " + side + " event '" + event +
                               "' has no sole instance, link dropped");
        return std::nullopt;
      }
      id = it->second.front();
    }
    if (id.empty()) {
      doc.warnings.push_back("TLINK " + link.lid + ": missing " + side + ", link dropped");
      return std::nullopt;
    }
    if (!known.count(id)) {
      doc.warnings.push_back("TLINK " + link.lid + ": unresolvable " + side + " '" + id +
                             "', link dropped");
      return std::nullopt;
    }
    return id;
  };

  for (const RawLink& raw : raw_links) {
    const auto source = resolve(raw, true);
    if (!source) continue;
    const auto target = resolve(raw, false);
    if (!target) continue;
    if (*source == *target) {
      doc.warnings.push_back("TLINK " + raw.lid + ": source equals target, link dropped");
      continue;
    }
    TLink link;
    link.lid = raw.lid;
    link.source = *source;
    link.target = *target;
    try {
      link.rel_type = reltype_from_string(raw.rel_type);
    } catch (const TimeMLError&) {
      doc.warnings.push_back("TLINK " + raw.lid + ": unknown relType '" + raw.rel_type +
                             "', link dropped");
      continue;
    }
    doc.tlinks.push_back(std::move(link));
  }

  return doc;
}

GoldNetworkResult gold_network(const TimeMLDocument& doc) {
  GoldNetworkResult result;
  ConstraintNetwork& net = result.network;
  for (const EventInstance& inst : doc.instances) net.add_node(NodeKind::Event, inst.eiid);
  for (const Timex& tx : doc.timexes) net.add_node(NodeKind::Timex, tx.tid);

  for (std::size_t i = 0; i < doc.tlinks.size(); ++i) {
    const TLink& link = doc.tlinks[i];
    net.assert_constraint(net.node_by_label(link.source), net.node_by_label(link.target),
                          RelationSet{map_reltype(link.rel_type)});
    if (net.propagate() == ConsistencyStatus::Inconsistent) {
      result.first_conflict = i;
      return result;
    }
  }
  net.propagate();
  return result;
}

GoldDenotation gold_denotation(const TimeMLDocument& doc, const std::string& anchor) {
  GoldNetworkResult gold = gold_network(doc);
  if (!gold.network.has_label(anchor)) {
    throw std::invalid_argument("unknown anchor '" + anchor + "'");
  }
  if (gold.network.status() == ConsistencyStatus::Inconsistent) {
    throw std::runtime_error("gold annotation for '" + doc.doc_id +
                             "' is inconsistent; repair its closure before querying denotations");
  }
  GoldDenotation out;
  const NodeId a = gold.network.node_by_label(anchor);
  for (const IntervalNode& node : gold.network.nodes()) {
    if (node.id == a) continue;
    const RelationSet r = gold.network.relation_between(a, node.id);
    if (r.is_singleton()) out.emplace(node.label, r);
  }
  return out;
}

namespace {

CorpusDocument make_corpus_document(std::string path, TimeMLDocument doc) {
  CorpusDocument cd;
  cd.path = std::move(path);
  GoldNetworkResult gold = gold_network(doc);
  cd.gold_status = gold.network.status();
  cd.first_conflict = gold.first_conflict;
  cd.document = std::move(doc);
  return cd;
}

CorpusManifest build_manifest(const std::vector<CorpusDocument>& documents) {
  CorpusManifest m;
  m.documents = documents.size();
  for (const CorpusDocument& cd : documents) {
    ManifestEntry e;
    e.doc_id = cd.document.doc_id;
    e.events = cd.document.events.size();
    e.instances = cd.document.instances.size();
    e.timexes = cd.document.timexes.size();
    e.links = cd.document.tlinks.size();
    e.warnings = cd.document.warnings.size();
    e.gold_status = cd.gold_status;
    m.events += e.events;
    m.instances += e.instances;
    m.timexes += e.timexes;
    m.links += e.links;
    m.warnings += e.warnings;
    if (cd.gold_status == ConsistencyStatus::Inconsistent) ++m.inconsistent;
    else ++m.consistent;
    m.entries.push_back(std::move(e));
  }
  return m;
}

}  // namespace

Corpus ingest_corpus(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw TimeMLError("corpus path '" + path + "' does not exist");

  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".tml") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }

  Corpus corpus;
  for (const fs::path& file : files) {
    std::ifstream in(file);
    if (!in) throw TimeMLError("cannot read '" + file.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    TimeMLDocument doc = parse_document(buffer.str());
    if (doc.doc_id.empty()) doc.doc_id = file.stem().string();
    corpus.documents.push_back(make_corpus_document(file.string(), std::move(doc)));
  }
  corpus.manifest = build_manifest(corpus.documents);
  return corpus;
}

Corpus corpus_from_documents(std::vector<TimeMLDocument> documents) {
  Corpus corpus;
  for (TimeMLDocument& doc : documents) {
    corpus.documents.push_back(make_corpus_document("", std::move(doc)));
  }
  corpus.manifest = build_manifest(corpus.documents);
  return corpus;
}

std::string manifest_to_json(const CorpusManifest& manifest, int indent) {
  nlohmann::ordered_json j;
  j["documents"] = manifest.documents;
  j["events"] = manifest.events;
  j["instances"] = manifest.instances;
  j["timexes"] = manifest.timexes;
  j["links"] = manifest.links;
  j["warnings"] = manifest.warnings;
  j["consistent"] = manifest.consistent;
  j["inconsistent"] = manifest.inconsistent;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const ManifestEntry& e : manifest.entries) {
    nlohmann::ordered_json je;
    je["doc"] = e.doc_id;
    je["events"] = e.events;
    je["instances"] = e.instances;
    je["timexes"] = e.timexes;
    je["links"] = e.links;
    je["warnings"] = e.warnings;
    je["status"] = std::string(to_string(e.gold_status));
    entries.push_back(std::move(je));
  }
  j["per_document"] = std::move(entries);
  return j.dump(indent);
}

}  // namespace tempra
