#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tempra/executor.hpp"

namespace tempra {

/// Weak supervision target: the gold Allen relation of the queried interval
/// to each linked context node. Every value is a singleton; unlinked labels
/// are absent and unconstrained.
using GoldDenotation = std::map<std::string, RelationSet>;

/// Strict: predicted set equals the gold singleton. Lax: predicted set
/// contains the gold relation (ablation mode; admits vacuous predictions).
enum class MatchMode : std::uint8_t { Strict, Lax };

/// Nesting f over g is spurious when compose({f},{g}) is {f} or {g}: the
/// outer application cannot refine the denotation. Shared by the enumerator's
/// pruning and the decoder's action filter.
bool composition_collapses(AllenRelation f, AllenRelation g);

struct SearchConfig {
  int max_actions = 12;       // bound on action-sequence length, >= 2
  bool pruning_enabled = true;
  MatchMode match_mode = MatchMode::Strict;
  std::optional<std::size_t> max_results;
};

struct EnumerationStats {
  std::size_t yielded = 0;
  std::size_t pruned = 0;  // expansions rejected by the pruning rules
};

/// Yields every canonical, well-typed form with action length <= max_actions,
/// each exactly once, in (action length, construction) order. Canonical means
/// set-operation arguments are distinct and ordered by serialization, greater
/// first, so `(intersection (before ei1) (after ei2))` is canonical and
/// (op X X) never appears. With pruning enabled the yield also omits relation
/// nestings (f (g X)) where compose({f},{g}) is {f} or {g}, and the equals
/// function; both removals are denotation-preserving at any fixed bound. The
/// callback returns false to stop early.
EnumerationStats enumerate_forms(const Vocabulary& vocab, const SearchConfig& cfg,
                                 const std::function<bool(const LogicalForm&)>& yield);

std::vector<LogicalForm> enumerate_forms(const Vocabulary& vocab, const SearchConfig& cfg);

/// True iff d is consistent and each gold entry is matched by d.relations
/// under the mode. Labels absent from gold are unconstrained.
bool matches(const Denotation& d, const GoldDenotation& gold,
             MatchMode mode = MatchMode::Strict);

struct SearchStats {
  std::size_t enumerated = 0;             // denotation evaluations during discovery
  std::size_t pruned = 0;                 // expansions rejected by the pruning rules
  std::size_t distinct_signatures = 0;    // distinct denotation signatures discovered
  std::size_t verification_failures = 0;  // emitted forms whose re-execution missed gold
  double elapsed_seconds = 0.0;
};

struct SearchResult {
  std::vector<LogicalForm> matches;  // canonical (serialization) order
  SearchStats stats;
};

/// Dynamic programming on denotations: groups subexpressions into equivalence
/// classes keyed by (denotation signature, outermost production), extends one
/// representative per class, and reconstructs every concrete matching form
/// from class recipes at the end. Each emitted form is re-executed against
/// gold before it is returned. Semantically equal to filtering enumerate_forms
/// through matches.
/// Throws std::invalid_argument on an empty vocabulary, gold labels outside
/// the vocabulary, non-singleton gold values, or max_actions < 2.
SearchResult search(const ExecutionContext& ctx, const GoldDenotation& gold,
                    const SearchConfig& cfg);

}  // namespace tempra
