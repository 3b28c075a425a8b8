#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tempra/algebra.hpp"
#include "tempra/network.hpp"

namespace tempra {

/// The type system: every complete expression is a TimeInterval; functions
/// are unary (relation functions) or binary (set operations).
enum class SemanticType : std::uint8_t { TimeInterval, Fn1, Fn2 };

std::string_view to_string(SemanticType t);

/// Grammar nonterminals: the semantic types plus the start symbol.
enum class Symbol : std::uint8_t { Start, TimeInterval, Fn1, Fn2 };

std::string_view to_string(Symbol s);

enum class SetOp : std::uint8_t { Union, Intersection };

std::string_view to_string(SetOp op);

/// Context constants available to a logical form: event instance and time
/// expression labels, unique within one vocabulary.
class Vocabulary {
 public:
  struct Entry {
    std::string label;
    NodeKind kind;  // Event or Timex
  };

  Vocabulary() = default;
  explicit Vocabulary(std::vector<Entry> entries);

  void add(std::string label, NodeKind kind);
  bool contains(std::string_view label) const;
  std::optional<NodeKind> kind_of(std::string_view label) const;
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Constants carry a context label, relation
/// applications one child, set operations two.
struct Expr {
  enum class Kind : std::uint8_t { Constant, Relation, SetOp };

  Kind kind;
  std::string label;     // Constant
  AllenRelation rel{};   // Relation
  SetOp op{};            // SetOp
  ExprPtr child;         // Relation
  ExprPtr left, right;   // SetOp

  static ExprPtr constant(std::string label);
  static ExprPtr relation(AllenRelation rel, ExprPtr child);
  static ExprPtr set_op(SetOp op, ExprPtr left, ExprPtr right);
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Grammar production. The inventory is fixed except for constants, which
/// come from a vocabulary.
struct Production {
  enum class Kind : std::uint8_t {
    StartToInterval,   // START -> TimeInterval
    ApplyFn1,          // TimeInterval -> [Fn1, TimeInterval]
    ApplyFn2,          // TimeInterval -> [Fn2, TimeInterval, TimeInterval]
    Fn1Name,           // Fn1 -> <relation>
    Fn2Name,           // Fn2 -> union | intersection
    Constant,          // TimeInterval -> <label>
  };

  Kind kind = Kind::StartToInterval;
  AllenRelation rel{};  // Fn1Name
  SetOp op{};           // Fn2Name
  std::string label;    // Constant

  static Production start();
  static Production apply_fn1();
  static Production apply_fn2();
  static Production fn1(AllenRelation r);
  static Production fn2(SetOp op);
  static Production constant(std::string label);

  Symbol lhs() const;

  /// "LHS -> RHS" rendering, e.g. "TimeInterval -> [Fn1, TimeInterval]".
  std::string to_string() const;

  bool operator==(const Production& other) const;
};

using ActionSequence = std::vector<Production>;

std::vector<std::string> actions_to_strings(const ActionSequence& seq);

/// Raised by parse/replay operations; carries a character offset for text
/// parses (npos for action replays).
class LangError : public std::runtime_error {
 public:
  LangError(std::string message, std::size_t offset = std::string::npos)
      : std::runtime_error(std::move(message)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A well-formed expression tree over the temporal grammar. Immutable;
/// cheap to copy (nodes are shared).
class LogicalForm {
 public:
  explicit LogicalForm(ExprPtr root);

  const ExprPtr& root() const { return root_; }

  /// Canonical S-expression, e.g. "(intersection (before ei1) (after t3))".
  std::string print() const;

  /// Returns TimeInterval after verifying every constant is in vocab.
  /// Throws LangError on an unknown constant.
  SemanticType type_check(const Vocabulary& vocab) const;

  /// Preorder linearization of the derivation as production applications.
  ActionSequence to_actions() const;

  /// Number of productions in to_actions(); counted without materializing.
  int action_length() const;

  int depth() const;

  bool operator==(const LogicalForm& other) const { return expr_equal(root_, other.root_); }

  /// Parses parenthesized prefix notation. Errors (unbalanced parentheses,
  /// unknown predicate, wrong arity) carry the offending offset.
  static LogicalForm parse(std::string_view text);

  /// Rebuilds the unique derivation tree from an action sequence; inverse of
  /// to_actions. Throws LangError on dangling nonterminals, inapplicable
  /// productions, or trailing actions.
  static LogicalForm from_actions(const ActionSequence& seq);

 private:
  ExprPtr root_;
};

bool operator<(const LogicalForm& a, const LogicalForm& b);  // by print()

/// The action space for a vocabulary. Generation grammars leave out the
/// equals relation function, whose application never changes a denotation.
struct GrammarOptions {
  bool include_equals = false;
};

std::vector<Production> productions_for(Symbol nonterminal, const Vocabulary& vocab,
                                        const GrammarOptions& opts = {});

/// All relation functions available under the given options.
std::vector<AllenRelation> relation_inventory(const GrammarOptions& opts = {});

}  // namespace tempra
