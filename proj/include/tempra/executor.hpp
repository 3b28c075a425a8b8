#pragma once

#include <map>
#include <string>
#include <vector>

#include "tempra/lang.hpp"
#include "tempra/network.hpp"

namespace tempra {

/// "is contained in or coincides with": the constraint a set-operation result
/// bears to (or receives from) its arguments.
inline constexpr RelationSet kContainmentSet{AllenRelation::Starts, AllenRelation::During,
                                             AllenRelation::Finishes, AllenRelation::Equals};

/// A relation asserted between two context nodes before execution, e.g. gold
/// or previously extracted links.
struct BackgroundConstraint {
  std::string source;
  std::string target;
  RelationSet relations;
};

/// What a logical form executes against: the constants it may mention and any
/// relations already known to hold between them.
struct ExecutionContext {
  Vocabulary vocabulary;
  std::vector<BackgroundConstraint> background;
};

/// The result of execution: the root interval's propagated relation to every
/// context node. Inconsistency is a value, not an error; the relations map is
/// empty exactly when status is Inconsistent.
struct Denotation {
  std::string root;
  std::map<std::string, RelationSet> relations;
  ConsistencyStatus status = ConsistencyStatus::Consistent;
};

bool operator==(const Denotation& a, const Denotation& b);

/// Execution keeping the full constraint network, for graph output.
struct ExecutionTrace {
  ConstraintNetwork network;
  std::string root_label;
  Denotation denotation;
};

/// Evaluates lf over ctx: constants name context nodes, relation functions
/// and set operations each introduce a fresh reference interval, background
/// constraints are asserted last, then the network is propagated.
/// Throws LangError if lf does not type-check against ctx.vocabulary.
Denotation execute(const LogicalForm& lf, const ExecutionContext& ctx);

/// execute(from_actions(seq), ctx); replay errors propagate as LangError.
Denotation execute_actions(const ActionSequence& seq, const ExecutionContext& ctx);

/// As execute, but returns the constraint network and root label too.
ExecutionTrace execute_trace(const LogicalForm& lf, const ExecutionContext& ctx);

/// Canonical one-line rendering: "INCONSISTENT", or semicolon-joined
/// "label:rel,rel" entries with labels and relation names sorted.
/// Equal denotations have equal signatures and vice versa.
std::string denotation_signature(const Denotation& d);

}  // namespace tempra
