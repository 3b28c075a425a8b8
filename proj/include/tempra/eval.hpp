#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tempra/dpd.hpp"
#include "tempra/timeml.hpp"

namespace tempra {

/// One predicted relation set for an ordered node pair.
struct PredictionRecord {
  std::string source;
  std::string target;
  RelationSet relations;
};

struct DocumentPredictions {
  std::string doc_id;
  std::vector<PredictionRecord> records;
};

struct DocumentEval {
  std::string doc_id;
  bool gold_consistent = true;
  std::size_t gold_links = 0;
  std::size_t predicted_pairs = 0;
  std::size_t matched = 0;
  std::size_t spurious_pairs = 0;  // predicted pairs with no gold counterpart
  std::optional<double> recall;    // absent when gold_links is 0
};

struct EvalReport {
  MatchMode mode = MatchMode::Strict;
  bool closure = false;
  std::size_t gold_links = 0;
  std::size_t predicted_pairs = 0;
  std::size_t matched = 0;
  std::size_t spurious_pairs = 0;
  std::optional<double> recall;
  std::vector<DocumentEval> documents;
  std::vector<std::string> warnings;
};

/// Scores predictions against each document's gold links. A gold link counts
/// as matched when the prediction for its ordered pair (or the converse of
/// the reverse pair) equals the gold singleton in strict mode, or contains
/// the gold relation in lax mode. The first record per ordered pair wins.
/// With closure on, a consistent document's gold set becomes every unordered
/// node pair the propagated gold network pins to a singleton; inconsistent
/// documents always score against their raw links. Predictions for unknown
/// documents are reported as warnings and ignored; documents without
/// predictions keep their gold links unmatched.
EvalReport evaluate(const Corpus& corpus, const std::vector<DocumentPredictions>& predictions,
                    MatchMode mode, bool closure = false);

/// One JSON object per line:
/// {"doc": id, "relations": [{"source":..., "target":..., "set":[names]}]}.
std::string predictions_to_jsonl(const std::vector<DocumentPredictions>& predictions);

/// Inverse of predictions_to_jsonl; blank lines are skipped. Throws
/// std::runtime_error naming the offending line on malformed input.
std::vector<DocumentPredictions> predictions_from_jsonl(std::string_view text);

std::string report_to_json(const EvalReport& report, int indent = 2);

/// Aligned per-document table with a totals row.
std::string report_to_table(const EvalReport& report);

}  // namespace tempra
