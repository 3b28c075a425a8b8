#include "tempra/eval.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tempra {

namespace {

struct GoldItem {
  std::string source;
  std::string target;
  AllenRelation relation;
};

/// Raw links, or the propagated singleton pairs when closure applies.
std::vector<GoldItem> gold_items(const CorpusDocument& doc, bool closure) {
  std::vector<GoldItem> items;
  if (closure && doc.gold_status == ConsistencyStatus::Consistent) {
    GoldNetworkResult gold = gold_network(doc.document);
    const auto& nodes = gold.network.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        const RelationSet r = gold.network.relation_between(nodes[i].id, nodes[j].id);
        if (r.is_singleton()) {
          items.push_back(GoldItem{nodes[i].label, nodes[j].label, r.single()});
        }
      }
    }
    return items;
  }
  for (const TLink& link : doc.document.tlinks) {
    items.push_back(GoldItem{link.source, link.target, map_reltype(link.rel_type)});
  }
  return items;
}

}  // namespace

EvalReport evaluate(const Corpus& corpus, const std::vector<DocumentPredictions>& predictions,
                    MatchMode mode, bool closure) {
  EvalReport report;
  report.mode = mode;
  report.closure = closure;

  std::map<std::string, const DocumentPredictions*> by_doc;
  for (const DocumentPredictions& p : predictions) {
    if (!by_doc.emplace(p.doc_id, &p).second) {
      report.warnings.push_back("duplicate predictions for document '" + p.doc_id +
                                "', first kept");
    }
  }

  std::set<std::string> corpus_ids;
  for (const CorpusDocument& cd : corpus.documents) {
    corpus_ids.insert(cd.document.doc_id);
    DocumentEval de;
    de.doc_id = cd.document.doc_id;
    de.gold_consistent = cd.gold_status != ConsistencyStatus::Inconsistent;

    std::map<std::pair<std::string, std::string>, RelationSet> predicted;
    const auto it = by_doc.find(de.doc_id);
    if (it != by_doc.end()) {
      for (const PredictionRecord& r : it->second->records) {
        predicted.emplace(std::make_pair(r.source, r.target), r.relations);
      }
    }
    de.predicted_pairs = predicted.size();

    const std::vector<GoldItem> items = gold_items(cd, closure);
    de.gold_links = items.size();
    for (const GoldItem& item : items) {
      std::optional<RelationSet> candidate;
      if (const auto f = predicted.find({item.source, item.target}); f != predicted.end()) {
        candidate = f->second;
      } else if (const auto r = predicted.find({item.target, item.source});
                 r != predicted.end()) {
        candidate = r->second.converse();
      }
      if (!candidate) continue;
      const bool hit = mode == MatchMode::Strict ? *candidate == RelationSet{item.relation}
                                                 : candidate->contains(item.relation);
      if (hit) ++de.matched;
    }

    for (const auto& [pair, rels] : predicted) {
      const bool covered = std::any_of(items.begin(), items.end(), [&](const GoldItem& g) {
        return (g.source == pair.first && g.target == pair.second) ||
               (g.source == pair.second && g.target == pair.first);
      });
      if (!covered) ++de.spurious_pairs;
    }

    if (de.gold_links > 0) {
      de.recall = static_cast<double>(de.matched) / static_cast<double>(de.gold_links);
    }
    report.gold_links += de.gold_links;
    report.predicted_pairs += de.predicted_pairs;
    report.matched += de.matched;
    report.spurious_pairs += de.spurious_pairs;
    report.documents.push_back(std::move(de));
  }

  for (const DocumentPredictions& p : predictions) {
    if (!corpus_ids.count(p.doc_id)) {
      report.warnings.push_back("predictions for unknown document '" + p.doc_id + "' ignored");
    }
  }

  if (report.gold_links > 0) {
    report.recall = static_cast<double>(report.matched) / static_cast<double>(report.gold_links);
  }
  return report;
}

std::string predictions_to_jsonl(const std::vector<DocumentPredictions>& predictions) {
  std::string out;
  for (const DocumentPredictions& doc : predictions) {
    nlohmann::ordered_json j;
    j["doc"] = doc.doc_id;
    nlohmann::ordered_json relations = nlohmann::ordered_json::array();
    for (const PredictionRecord& r : doc.records) {
      nlohmann::ordered_json jr;
      jr["source"] = r.source;
      jr["target"] = r.target;
      jr["set"] = r.relations.sorted_names();
      relations.push_back(std::move(jr));
    }
    j["relations"] = std::move(relations);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<DocumentPredictions> predictions_from_jsonl(std::string_view text) {
  std::vector<DocumentPredictions> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      DocumentPredictions doc;
      doc.doc_id = j.at("doc").get<std::string>();
      for (const nlohmann::json& jr : j.at("relations")) {
        PredictionRecord r;
        r.source = jr.at("source").get<std::string>();
        r.target = jr.at("target").get<std::string>();
        for (const nlohmann::json& name : jr.at("set")) {
          r.relations |= relation_from_string(name.get<std::string>());
        }
        doc.records.push_back(std::move(r));
      }
      out.push_back(std::move(doc));
    } catch (const std::exception& e) {
      throw std::runtime_error("predictions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

namespace {

nlohmann::ordered_json recall_json(const std::optional<double>& recall) {
  if (!recall) return nullptr;
  return *recall;
}

}  // namespace

std::string report_to_json(const EvalReport& report, int indent) {
  nlohmann::ordered_json j;
  j["mode"] = report.mode == MatchMode::Strict ? "strict" : "lax";
  j["closure"] = report.closure;
  j["gold_links"] = report.gold_links;
  j["predicted_pairs"] = report.predicted_pairs;
  j["matched"] = report.matched;
  j["spurious_pairs"] = report.spurious_pairs;
  j["recall"] = recall_json(report.recall);
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const DocumentEval& de : report.documents) {
    nlohmann::ordered_json jd;
    jd["doc"] = de.doc_id;
    jd["gold_consistent"] = de.gold_consistent;
    jd["gold_links"] = de.gold_links;
    jd["predicted_pairs"] = de.predicted_pairs;
    jd["matched"] = de.matched;
    jd["spurious_pairs"] = de.spurious_pairs;
    jd["recall"] = recall_json(de.recall);
    docs.push_back(std::move(jd));
  }
  j["documents"] = std::move(docs);
  j["warnings"] = report.warnings;
  return j.dump(indent);
}

std::string report_to_table(const EvalReport& report) {
  struct Row {
    std::string doc, gold, pred, matched, recall, note;
  };
  const auto fmt_recall = [](const std::optional<double>& r) -> std::string {
    if (!r) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *r);
    return buf;
  };
  std::vector<Row> rows;
  rows.push_back(Row{"document", "gold", "predicted", "matched", "recall", ""});
  for (const DocumentEval& de : report.documents) {
    rows.push_back(Row{de.doc_id, std::to_string(de.gold_links),
                       std::to_string(de.predicted_pairs), std::to_string(de.matched),
                       fmt_recall(de.recall), de.gold_consistent ? "" : "inconsistent gold"});
  }
  rows.push_back(Row{"total", std::to_string(report.gold_links),
                     std::to_string(report.predicted_pairs), std::to_string(report.matched),
                     fmt_recall(report.recall), ""});

  std::size_t w[5] = {0, 0, 0, 0, 0};
  for (const Row& r : rows) {
    w[0] = std::max(w[0], r.doc.size());
    w[1] = std::max(w[1], r.gold.size());
    w[2] = std::max(w[2], r.pred.size());
    w[3] = std::max(w[3], r.matched.size());
    w[4] = std::max(w[4], r.recall.size());
  }
  const auto pad = [](const std::string& s, std::size_t width) {
    return s + std::string(width - s.size(), ' ');
  };
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    if (i + 1 == rows.size()) {
      out += std::string(w[0] + w[1] + w[2] + w[3] + w[4] + 8, '-');
      out += '\n';
    }
    out += pad(r.doc, w[0]) + "  " + pad(r.gold, w[1]) + "  " + pad(r.pred, w[2]) + "  " +
           pad(r.matched, w[3]) + "  " + pad(r.recall, w[4]);
    if (!r.note.empty()) out += "  " + r.note;
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

}  // namespace tempra
