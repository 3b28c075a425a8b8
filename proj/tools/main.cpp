#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tempra/decoder.hpp"
#include "tempra/dpd.hpp"
#include "tempra/eval.hpp"
#include "tempra/pipeline.hpp"
#include "tempra/timeml.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace tempra;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

/// Labels beginning with 't' follow the TimeML tid convention and are taken
/// as time expressions; everything else is an event instance.
NodeKind infer_kind(const std::string& label) {
  return !label.empty() && label.front() == 't' ? NodeKind::Timex : NodeKind::Event;
}

RelationSet set_from_json(const json& j) {
  if (j.is_string()) return RelationSet::from_string(j.get<std::string>());
  RelationSet s;
  for (const json& name : j) s |= relation_from_string(name.get<std::string>());
  return s;
}

Vocabulary vocab_from_json(const json& j) {
  Vocabulary vocab;
  for (const json& entry : j) {
    if (entry.is_string()) {
      const auto label = entry.get<std::string>();
      vocab.add(label, infer_kind(label));
    } else {
      vocab.add(entry.at("label").get<std::string>(),
                node_kind_from_string(entry.at("kind").get<std::string>()));
    }
  }
  return vocab;
}

Vocabulary vocab_from_csv(const std::string& csv) {
  Vocabulary vocab;
  std::istringstream in(csv);
  std::string label;
  while (std::getline(in, label, ',')) {
    if (!label.empty()) vocab.add(label, infer_kind(label));
  }
  return vocab;
}

std::vector<BackgroundConstraint> background_from_json(const json& j) {
  std::vector<BackgroundConstraint> background;
  for (const json& c : j) {
    background.push_back(BackgroundConstraint{c.at("source").get<std::string>(),
                                              c.at("target").get<std::string>(),
                                              set_from_json(c.at("set"))});
  }
  return background;
}

MatchMode match_from_string(const std::string& s) {
  if (s == "strict") return MatchMode::Strict;
  if (s == "lax") return MatchMode::Lax;
  throw std::runtime_error("--match must be 'strict' or 'lax', got '" + s + "'");
}

bool pruning_from_string(const std::string& s) {
  if (s == "on") return true;
  if (s == "off") return false;
  throw std::runtime_error("--pruning must be 'on' or 'off', got '" + s + "'");
}

TriggerTable triggers_from_file(const std::string& path) {
  const json j = json::parse(read_file(path));
  TriggerTable table;
  for (const auto& [lexeme, name] : j.items()) {
    table.triggers[lexeme] = relation_from_string(name.get<std::string>());
  }
  return table;
}

ordered_json denotation_json(const Denotation& d) {
  ordered_json j;
  j["root"] = d.root;
  j["status"] = std::string(to_string(d.status));
  ordered_json relations = ordered_json::object();
  for (const auto& [label, set] : d.relations) relations[label] = set.sorted_names();
  j["relations"] = std::move(relations);
  return j;
}

ordered_json triggers_json(const TriggerTable& table) {
  ordered_json j = ordered_json::object();
  for (const auto& [lexeme, rel] : table.triggers) j[lexeme] = std::string(to_string(rel));
  return j;
}

int cmd_algebra_compose(const std::string& a, const std::string& b) {
  const RelationSet result = compose(RelationSet::from_string(a), RelationSet::from_string(b));
  std::cout << result.to_string() << "\n";
  return 0;
}

int cmd_net_solve(const std::string& input_path) {
  const json j = json::parse(read_file(input_path));
  ConstraintNetwork net;
  for (const json& n : j.at("nodes")) {
    if (n.is_string()) {
      const auto label = n.get<std::string>();
      net.add_node(infer_kind(label), label);
    } else {
      net.add_node(node_kind_from_string(n.at("kind").get<std::string>()),
                   n.at("label").get<std::string>());
    }
  }
  for (const json& c : j.value("constraints", json::array())) {
    net.assert_constraint(net.node_by_label(c.at("source").get<std::string>()),
                          net.node_by_label(c.at("target").get<std::string>()),
                          set_from_json(c.at("set")));
  }
  net.propagate();
  std::cout << net.to_json() << "\n";
  return net.status() == ConsistencyStatus::Inconsistent ? 2 : 0;
}

int cmd_lf_exec(const std::string& form_text, const std::string& vocab_csv,
                const std::string& background_path) {
  const LogicalForm form = LogicalForm::parse(form_text);
  ExecutionContext ctx;
  ctx.vocabulary = vocab_from_csv(vocab_csv);
  if (!background_path.empty()) {
    ctx.background = background_from_json(json::parse(read_file(background_path)));
  }
  const Denotation d = execute(form, ctx);
  ordered_json out;
  out["form"] = form.print();
  out["actions"] = actions_to_strings(form.to_actions());
  out["denotation"] = denotation_json(d);
  out["signature"] = denotation_signature(d);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_dpd_search(const std::string& input_path, int max_actions, const std::string& pruning,
                   const std::string& match, int max_results) {
  const json j = json::parse(read_file(input_path));
  ExecutionContext ctx;
  ctx.vocabulary = vocab_from_json(j.at("vocabulary"));
  if (j.contains("background")) ctx.background = background_from_json(j.at("background"));
  GoldDenotation gold;
  for (const auto& [label, value] : j.at("gold").items()) {
    gold[label] = set_from_json(value);
  }
  SearchConfig cfg;
  cfg.max_actions = max_actions;
  cfg.pruning_enabled = pruning_from_string(pruning);
  cfg.match_mode = match_from_string(match);
  if (max_results > 0) cfg.max_results = static_cast<std::size_t>(max_results);

  const SearchResult result = search(ctx, gold, cfg);
  for (const LogicalForm& form : result.matches) std::cout << form.print() << "\n";
  ordered_json stats;
  stats["matches"] = result.matches.size();
  stats["enumerated"] = result.stats.enumerated;
  stats["pruned"] = result.stats.pruned;
  stats["distinct_signatures"] = result.stats.distinct_signatures;
  stats["verification_failures"] = result.stats.verification_failures;
  stats["elapsed_seconds"] = result.stats.elapsed_seconds;
  std::cerr << stats.dump(2) << "\n";
  return 0;
}

int cmd_corpus_ingest(const std::string& corpus_path, const std::string& out_path) {
  const Corpus corpus = ingest_corpus(corpus_path);
  const std::string manifest = manifest_to_json(corpus.manifest);
  if (out_path.empty()) {
    std::cout << manifest << "\n";
  } else {
    write_file(out_path, manifest + "\n");
  }
  for (const CorpusDocument& doc : corpus.documents) {
    for (const std::string& w : doc.document.warnings) {
      std::cerr << doc.document.doc_id << ": " << w << "\n";
    }
  }
  return 0;
}

int cmd_decode(const std::string& input_path, int beam, int max_actions, int top,
               const std::string& triggers_path) {
  const json j = json::parse(read_file(input_path));
  const Vocabulary vocab = vocab_from_json(j.at("vocabulary"));
  std::vector<std::string> tokens;
  if (j.contains("tokens")) {
    for (const json& t : j.at("tokens")) tokens.push_back(t.get<std::string>());
  } else if (j.contains("text")) {
    tokens = tokenize(j.at("text").get<std::string>());
  }

  TriggerTable triggers = TriggerTable::defaults();
  if (!triggers_path.empty()) {
    triggers = triggers_from_file(triggers_path);
  } else if (j.contains("triggers")) {
    triggers.triggers.clear();
    for (const auto& [lexeme, name] : j.at("triggers").items()) {
      triggers.triggers[lexeme] = relation_from_string(name.get<std::string>());
    }
  }

  SentenceContext sentence;
  sentence.annotation_order = vocab.entries();
  if (j.contains("focus")) sentence.focus = j.at("focus").get<std::string>();

  const Scorer scorer = lexical_scorer(tokens, triggers, sentence);
  const auto results = beam_search(vocab, scorer, BeamConfig{beam, max_actions});

  ExecutionContext ctx;
  ctx.vocabulary = vocab;
  ordered_json out;
  out["tokens"] = tokens;
  ordered_json forms = ordered_json::array();
  const std::size_t limit = top > 0 ? static_cast<std::size_t>(top) : results.size();
  for (std::size_t i = 0; i < results.size() && i < limit; ++i) {
    const ScoredForm& r = results[i];
    ordered_json jf;
    jf["form"] = r.form.print();
    jf["score"] = r.score;
    jf["actions"] = actions_to_strings(r.actions);
    jf["denotation"] = denotation_json(execute(r.form, ctx));
    forms.push_back(std::move(jf));
  }
  out["results"] = std::move(forms);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_eval(const std::string& corpus_path, const std::string& predictions_path,
             const std::string& match, bool closure, const std::string& out_path) {
  const Corpus corpus = ingest_corpus(corpus_path);
  const auto predictions = predictions_from_jsonl(read_file(predictions_path));
  const EvalReport report =
      evaluate(corpus, predictions, match_from_string(match), closure);
  const std::string json_text = report_to_json(report);
  if (out_path.empty()) {
    std::cout << json_text << "\n";
  } else {
    write_file(out_path, json_text + "\n");
  }
  std::cerr << report_to_table(report);
  return 0;
}

int cmd_pipeline(const std::string& corpus_path, const std::string& out_dir, int max_actions,
                 int beam, const std::string& match, bool closure, int jobs,
                 const std::string& triggers_path, const std::string& scorer_name) {
  PipelineConfig cfg;
  cfg.max_actions = max_actions;
  cfg.beam_width = beam;
  cfg.match_mode = match_from_string(match);
  cfg.closure = closure;
  cfg.jobs = jobs;
  if (scorer_name == "lexical") {
    cfg.lexical = true;
  } else if (scorer_name == "uniform") {
    cfg.lexical = false;
  } else {
    throw std::runtime_error("--scorer must be 'lexical' or 'uniform', got '" + scorer_name +
                             "'");
  }
  if (!triggers_path.empty()) cfg.triggers = triggers_from_file(triggers_path);

  const Corpus corpus = ingest_corpus(corpus_path);
  const auto started = std::chrono::steady_clock::now();
  const PipelineResult result = run_pipeline(corpus, cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::string graphs;
  for (const PipelineDocument& doc : result.documents) {
    ordered_json jd;
    jd["doc"] = doc.doc_id;
    ordered_json anchors = ordered_json::array();
    for (const AnchorDecode& a : doc.decodes) {
      ordered_json ja;
      ja["anchor"] = a.anchor;
      ja["form"] = a.form;
      ja["score"] = a.score;
      ja["denotation"] = denotation_json(a.denotation);
      anchors.push_back(std::move(ja));
    }
    jd["anchors"] = std::move(anchors);
    if (!doc.errors.empty()) jd["errors"] = doc.errors;
    graphs += jd.dump();
    graphs += '\n';
  }

  ordered_json report;
  ordered_json config;
  config["max_actions"] = cfg.max_actions;
  config["beam"] = cfg.beam_width;
  config["match"] = cfg.match_mode == MatchMode::Strict ? "strict" : "lax";
  config["closure"] = cfg.closure;
  config["jobs"] = cfg.jobs;
  config["scorer"] = cfg.lexical ? "lexical" : "uniform";
  config["triggers"] = triggers_json(cfg.triggers);
  report["config"] = std::move(config);
  report["evaluation"] = ordered_json::parse(report_to_json(result.report));
  ordered_json errors = ordered_json::object();
  for (const PipelineDocument& doc : result.documents) {
    if (!doc.errors.empty()) errors[doc.doc_id] = doc.errors;
  }
  report["pipeline_errors"] = std::move(errors);
  report["timing"] = ordered_json{{"seconds", elapsed}};

  std::filesystem::create_directories(out_dir);
  const auto out = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_file(out("predictions.jsonl"), predictions_to_jsonl(result.predictions));
  write_file(out("graphs.jsonl"), graphs);
  write_file(out("report.json"), report.dump(2) + "\n");
  write_file(out("report.txt"), report_to_table(result.report));
  std::cout << report_to_table(result.report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal reasoning over interval algebra: constraint networks, executable "
               "logical forms, denotation search, TimeML corpora, and decoding"};
  app.require_subcommand(1);

  // algebra compose
  auto* algebra = app.add_subcommand("algebra", "Relation algebra operations");
  algebra->require_subcommand(1);
  auto* compose_cmd = algebra->add_subcommand("compose", "Compose two relation sets");
  std::string compose_a, compose_b;
  compose_cmd->add_option("a", compose_a, "First set, comma-joined names (e.g. before,meets)")
      ->required();
  compose_cmd->add_option("b", compose_b, "Second set")->required();

  // net solve
  auto* net = app.add_subcommand("net", "Constraint network operations");
  net->require_subcommand(1);
  auto* solve_cmd = net->add_subcommand(
      "solve", "Propagate a network to path consistency; exit 2 when inconsistent");
  std::string solve_input;
  solve_cmd
      ->add_option("--input", solve_input,
                   "JSON: {nodes: [label | {label, kind}], constraints: [{source, target, "
                   "set}]}")
      ->required();

  // lf exec
  auto* lf = app.add_subcommand("lf", "Logical form operations");
  lf->require_subcommand(1);
  auto* exec_cmd = lf->add_subcommand("exec", "Parse and execute a logical form");
  std::string exec_form, exec_vocab, exec_background;
  exec_cmd->add_option("form", exec_form, "S-expression, e.g. \"(before ei1)\"")->required();
  exec_cmd
      ->add_option("--vocab", exec_vocab,
                   "Comma-joined labels; labels starting with 't' are time expressions")
      ->required();
  exec_cmd->add_option("--background", exec_background,
                       "JSON file: [{source, target, set}] asserted before propagation");

  // dpd search
  auto* dpd = app.add_subcommand("dpd", "Denotation-driven search");
  dpd->require_subcommand(1);
  auto* search_cmd = dpd->add_subcommand(
      "search", "Enumerate logical forms matching a gold denotation; stats go to stderr");
  std::string search_input, search_pruning = "on", search_match = "strict";
  int search_max_actions = 12, search_max_results = 0;
  search_cmd
      ->add_option("--input", search_input,
                   "JSON: {vocabulary, gold: {label: relation}, background?}")
      ->required();
  search_cmd->add_option("--max-actions", search_max_actions, "Action budget (default 12)");
  search_cmd->add_option("--pruning", search_pruning, "on|off (default on)");
  search_cmd->add_option("--match", search_match, "strict|lax (default strict)");
  search_cmd->add_option("--max-results", search_max_results,
                         "Keep only the first N matches in serialization order");

  // corpus ingest
  auto* corpus = app.add_subcommand("corpus", "TimeML corpus operations");
  corpus->require_subcommand(1);
  auto* ingest_cmd =
      corpus->add_subcommand("ingest", "Parse .tml documents and write the corpus manifest");
  std::string ingest_corpus_path, ingest_out;
  ingest_cmd->add_option("--corpus", ingest_corpus_path, "Directory of .tml files, or one file")
      ->required();
  ingest_cmd->add_option("--out", ingest_out, "Manifest path (stdout when omitted)");

  // decode
  auto* decode_cmd =
      app.add_subcommand("decode", "Beam-decode logical forms for one sentence context");
  std::string decode_input, decode_triggers;
  int decode_beam = 10, decode_max_actions = 12, decode_top = 5;
  decode_cmd
      ->add_option("--input", decode_input,
                   "JSON: {tokens | text, vocabulary, triggers?, focus?}")
      ->required();
  decode_cmd->add_option("--beam", decode_beam, "Beam width (default 10)");
  decode_cmd->add_option("--max-actions", decode_max_actions, "Action budget (default 12)");
  decode_cmd->add_option("--top", decode_top, "Results to report (default 5)");
  decode_cmd->add_option("--triggers", decode_triggers,
                         "JSON file {lexeme: relation} replacing the default trigger table");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against a gold corpus");
  std::string eval_corpus, eval_predictions, eval_match = "strict", eval_out;
  bool eval_closure = false;
  eval_cmd->add_option("--corpus", eval_corpus, "Directory of .tml files, or one file")
      ->required();
  eval_cmd->add_option("--predictions", eval_predictions, "Predictions JSONL")->required();
  eval_cmd->add_option("--match", eval_match, "strict|lax (default strict)");
  eval_cmd->add_flag("--closure", eval_closure,
                     "Score consistent documents against all propagated singleton pairs");
  eval_cmd->add_option("--out", eval_out, "Report JSON path (stdout when omitted)");

  // pipeline
  auto* pipeline_cmd = app.add_subcommand(
      "pipeline", "Decode, execute, and evaluate a corpus end to end");
  std::string pl_corpus, pl_out, pl_match = "strict", pl_triggers, pl_scorer = "lexical";
  int pl_max_actions = 12, pl_beam = 10, pl_jobs = 1;
  bool pl_closure = false;
  pipeline_cmd->add_option("--corpus", pl_corpus, "Directory of .tml files, or one file")
      ->required();
  pipeline_cmd
      ->add_option("--out", pl_out,
                   "Output directory for predictions.jsonl, graphs.jsonl, report.json, "
                   "report.txt")
      ->required();
  pipeline_cmd->add_option("--max-actions", pl_max_actions, "Action budget (default 12)");
  pipeline_cmd->add_option("--beam", pl_beam, "Beam width (default 10)");
  pipeline_cmd->add_option("--match", pl_match, "strict|lax (default strict)");
  pipeline_cmd->add_flag("--closure", pl_closure,
                         "Evaluate against propagated singleton pairs where consistent");
  pipeline_cmd->add_option("--jobs", pl_jobs, "Documents processed in parallel (default 1)");
  pipeline_cmd->add_option("--triggers", pl_triggers,
                           "JSON file {lexeme: relation} replacing the default trigger table");
  pipeline_cmd->add_option("--scorer", pl_scorer,
                           "lexical|uniform; uniform is the bare-constant baseline");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compose_cmd->parsed()) return cmd_algebra_compose(compose_a, compose_b);
    if (solve_cmd->parsed()) return cmd_net_solve(solve_input);
    if (exec_cmd->parsed()) return cmd_lf_exec(exec_form, exec_vocab, exec_background);
    if (search_cmd->parsed()) {
      return cmd_dpd_search(search_input, search_max_actions, search_pruning, search_match,
                            search_max_results);
    }
    if (ingest_cmd->parsed()) return cmd_corpus_ingest(ingest_corpus_path, ingest_out);
    if (decode_cmd->parsed()) {
      return cmd_decode(decode_input, decode_beam, decode_max_actions, decode_top,
                        decode_triggers);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_corpus, eval_predictions, eval_match, eval_closure, eval_out);
    }
    if (pipeline_cmd->parsed()) {
      return cmd_pipeline(pl_corpus, pl_out, pl_max_actions, pl_beam, pl_match, pl_closure,
                          pl_jobs, pl_triggers, pl_scorer);
    }
  } catch (const std::exception& e) {
    const ordered_json error{{"error", e.what()}};
    std::cerr << error.dump() << "\n";
    return 1;
  }
  return 0;
}
