#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tempra/dpd.hpp"
#include "tempra/lang.hpp"

namespace tempra {

/// Transition-system state. Actions replay in preorder: the frontier is a
/// stack of pending nonterminals (top at the back), frames hold partially
/// applied functions awaiting children. Terminal iff the frontier is empty;
/// then root() is the finished expression.
class ParserState {
 public:
  /// Frontier [Start], no actions.
  static ParserState initial();

  bool terminal() const { return frontier_.empty(); }
  const std::vector<Symbol>& frontier() const { return frontier_; }
  Symbol frontier_top() const;
  const ActionSequence& actions() const { return actions_; }
  int length() const { return static_cast<int>(actions_.size()); }

  /// The completed expression. Throws std::logic_error unless terminal.
  const ExprPtr& root() const;

  /// The relation whose application encloses the frontier top, if the top is
  /// Fn1's argument position or Fn1 itself has not yet been named; nullopt at
  /// the root or under a set operation.
  std::optional<AllenRelation> enclosing_relation() const;

 private:
  friend std::vector<Production> valid_actions(const ParserState&, const Vocabulary&, int);
  friend ParserState step(const ParserState&, const Production&, const Vocabulary&, int);

  struct Frame {
    enum class Kind : std::uint8_t { Unary, Binary };
    Kind kind = Kind::Unary;
    AllenRelation rel{};            // Unary
    SetOp op{};                     // Binary
    std::vector<ExprPtr> children;  // completed arguments so far
  };

  /// Applies the production without validation; nullopt when a set-operation
  /// frame would receive a second argument equal to its first.
  std::optional<ParserState> apply(const Production& action) const;

  /// Fewest further actions to any terminal state the pruning rules admit.
  int min_completion(const Vocabulary& vocab) const;

  /// Full admission check (lhs, vocabulary, pruning rules, budget lookahead).
  /// Returns the successor state or nullopt; a reason is written on reject
  /// when asked for.
  static std::optional<ParserState> admit(const ParserState& state, const Production& action,
                                          const Vocabulary& vocab, int max_actions,
                                          std::string* why);

  std::vector<Symbol> frontier_;
  ActionSequence actions_;
  std::vector<Frame> frames_;
  ExprPtr root_;
};

/// Action scorer: deterministic map from (state, action) to a real number.
/// Sentence context is baked into the closure. Must be safe for concurrent
/// read-only use.
using Scorer = std::function<double(const ParserState& state, const Production& action)>;

/// The constant scorer 0; beam search then ranks purely by the tie-breaks
/// (fewer actions first, then serialization), so the top form is the bare
/// constant with the least print.
Scorer uniform_scorer();

/// Legal next productions: lhs matches the frontier top, constants drawn from
/// vocab, generation pruning applied (no equals function, no relation g
/// directly under a relation f when compose({f},{g}) collapses to {f} or {g},
/// no set operation applied to two copies of the same expression), and every
/// option must still be completable within max_actions (minimum-completion
/// lookahead). Empty only when the state is terminal.
std::vector<Production> valid_actions(const ParserState& state, const Vocabulary& vocab,
                                      int max_actions);

/// Applies one production: pops the frontier top, pushes the production's
/// nonterminals so that replay order is preorder, and assembles the
/// expression bottom-up. Throws std::invalid_argument if the action is not in
/// valid_actions(state, vocab, max_actions).
ParserState step(const ParserState& state, const Production& action, const Vocabulary& vocab,
                 int max_actions);

struct ScoredForm {
  LogicalForm form;
  double score = 0.0;
  ActionSequence actions;
};

struct BeamConfig {
  int beam_width = 10;
  int max_actions = 12;
};

/// Beam search over the transition system: expands every live hypothesis over
/// its valid actions, keeps the top beam_width by accumulated score (ties by
/// action sequence order), and collects terminal hypotheses. A set-operation
/// form is collected only in canonical argument order (greater serialization
/// first); the mirrored derivation scores identically under any
/// production-additive scorer and is skipped so each form is listed once.
/// Returns completed forms sorted by score descending, ties broken by fewer
/// actions then by serialization. Empty when nothing completes within
/// max_actions. Throws std::invalid_argument if beam_width < 1 or
/// max_actions < 2, or on an empty vocabulary.
std::vector<ScoredForm> beam_search(const Vocabulary& vocab, const Scorer& scorer,
                                    const BeamConfig& cfg = {});

/// Lexeme -> relation triggers consulted by the lexical scorer.
struct TriggerTable {
  std::map<std::string, AllenRelation> triggers;

  /// before->before, after->after, while->during, during->during,
  /// until->meets, when->equals.
  static TriggerTable defaults();
};

/// Context for the lexical scorer's constant bonus: vocabulary labels in
/// annotation order with their kinds, and the label whose interval the
/// decoded form describes (usually the anchor; not itself in the
/// vocabulary).
struct SentenceContext {
  std::vector<Vocabulary::Entry> annotation_order;
  std::optional<std::string> focus;
};

/// Non-neural baseline scorer. Adds +1 to a relation-function production
/// whose relation is triggered by any lowercased sentence token, +0.5 to
/// constant productions for the event nearest the focus (annotation-order
/// distance, ties to the earlier label; all events when the focus is unknown;
/// all constants when the vocabulary has no events), 0 otherwise. Each bonus
/// pays out on its first application in a derivation only, so one cue cannot
/// be stacked into an ever-higher score.
Scorer lexical_scorer(const std::vector<std::string>& tokens, const TriggerTable& triggers,
                      const SentenceContext& context);

}  // namespace tempra
