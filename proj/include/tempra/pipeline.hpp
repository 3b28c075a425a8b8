#pragma once

#include <string>
#include <vector>

#include "tempra/decoder.hpp"
#include "tempra/eval.hpp"

namespace tempra {

struct PipelineConfig {
  int max_actions = 12;
  int beam_width = 10;
  MatchMode match_mode = MatchMode::Strict;
  bool closure = false;
  int jobs = 1;
  bool lexical = true;  // false: uniform scorer, the bare-constant baseline
  TriggerTable triggers = TriggerTable::defaults();
};

/// One anchor's decoded form and its executed denotation.
struct AnchorDecode {
  std::string anchor;
  std::string form;  // canonical serialization
  double score = 0.0;
  Denotation denotation;
};

struct PipelineDocument {
  std::string doc_id;
  std::vector<AnchorDecode> decodes;
  std::vector<std::string> errors;
};

struct PipelineResult {
  std::vector<DocumentPredictions> predictions;  // corpus order
  std::vector<PipelineDocument> documents;       // corpus order
  EvalReport report;
};

/// Maximal alphanumeric runs, so punctuation never hides a trigger lexeme.
std::vector<std::string> tokenize(std::string_view text);

/// Per document: the vocabulary is its event instances then its timexes in
/// annotation order; every instance anchors one decode over the vocabulary
/// minus itself (the decoded form describes the anchor's interval), the top
/// beam result executes, and each singleton row of the denotation becomes the
/// prediction for (anchor, node). The first anchor to pin an unordered pair
/// wins. Document failures are recorded and skipped, not fatal. Documents
/// run in parallel up to cfg.jobs; outputs are in corpus order regardless.
PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& cfg = {});

}  // namespace tempra
