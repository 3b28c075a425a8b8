#include "tempra/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <set>
#include <thread>

namespace tempra {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += c;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

struct DocOutput {
  DocumentPredictions predictions;
  PipelineDocument document;
};

DocOutput process_document(const CorpusDocument& cd, const PipelineConfig& cfg) {
  DocOutput out;
  out.predictions.doc_id = cd.document.doc_id;
  out.document.doc_id = cd.document.doc_id;
  try {
    Vocabulary vocab;
    for (const EventInstance& inst : cd.document.instances) {
      vocab.add(inst.eiid, NodeKind::Event);
    }
    for (const Timex& tx : cd.document.timexes) vocab.add(tx.tid, NodeKind::Timex);

    const std::vector<std::string> tokens = tokenize(cd.document.text);
    std::set<std::pair<std::string, std::string>> taken;

    for (const EventInstance& anchor : cd.document.instances) {
      Vocabulary context_vocab;
      for (const Vocabulary::Entry& e : vocab.entries()) {
        if (e.label != anchor.eiid) context_vocab.add(e.label, e.kind);
      }
      if (context_vocab.empty()) continue;

      SentenceContext sentence{vocab.entries(), anchor.eiid};
      const Scorer scorer = cfg.lexical ? lexical_scorer(tokens, cfg.triggers, sentence)
                                        : uniform_scorer();
      const auto results =
          beam_search(context_vocab, scorer, BeamConfig{cfg.beam_width, cfg.max_actions});
      if (results.empty()) {
        out.document.errors.push_back("anchor " + anchor.eiid +
                                      ": no form completes within the action budget");
        continue;
      }
      const ScoredForm& top = results.front();

      ExecutionContext exec_ctx;
      exec_ctx.vocabulary = context_vocab;
      Denotation denotation = execute(top.form, exec_ctx);

      for (const auto& [label, relations] : denotation.relations) {
        if (!relations.is_singleton()) continue;
        auto key = std::minmax(anchor.eiid, label);
        if (!taken.insert(std::pair(key.first, key.second)).second) continue;
        out.predictions.records.push_back(PredictionRecord{anchor.eiid, label, relations});
      }
      out.document.decodes.push_back(
          AnchorDecode{anchor.eiid, top.form.print(), top.score, std::move(denotation)});
    }
  } catch (const std::exception& e) {
    out.document.errors.push_back(std::string("document failed: ") + e.what());
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& cfg) {
  const std::size_t count = corpus.documents.size();
  std::vector<DocOutput> outputs(count);

  const int jobs = std::max(1, cfg.jobs);
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      outputs[i] = process_document(corpus.documents[i], cfg);
    }
  } else {
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        outputs[i] = process_document(corpus.documents[i], cfg);
      }
    };
    std::vector<std::thread> pool;
    const std::size_t width = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    pool.reserve(width);
    for (std::size_t t = 0; t < width; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  PipelineResult result;
  result.predictions.reserve(count);
  result.documents.reserve(count);
  for (DocOutput& out : outputs) {
    result.predictions.push_back(std::move(out.predictions));
    result.documents.push_back(std::move(out.document));
  }
  result.report = evaluate(corpus, result.predictions, cfg.match_mode, cfg.closure);
  return result;
}

}  // namespace tempra
