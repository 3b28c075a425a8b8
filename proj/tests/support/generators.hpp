#pragma once

// Seeded random construction of relation sets and grammar-derived logical
// forms for property tests. All draws go through the caller's engine, so a
// fixed seed reproduces the whole sequence.

#include <random>
#include <string>
#include <vector>

#include "tempra/algebra.hpp"
#include "tempra/dpd.hpp"
#include "tempra/lang.hpp"

namespace tempra::testgen {

inline AllenRelation random_relation(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, kRelationCount - 1);
  return static_cast<AllenRelation>(pick(rng));
}

inline RelationSet random_relation_set(std::mt19937& rng, bool allow_empty = false) {
  std::uniform_int_distribution<int> pick(0, kAllRelationsMask);
  RelationSet s = RelationSet::from_bits(static_cast<std::uint16_t>(pick(rng)));
  if (!allow_empty && s.empty()) s = RelationSet(random_relation(rng));
  return s;
}

/// Random subset of s (possibly s itself, possibly empty).
inline RelationSet random_subset(std::mt19937& rng, RelationSet s) {
  std::uniform_int_distribution<int> pick(0, kAllRelationsMask);
  return RelationSet::from_bits(static_cast<std::uint16_t>(s.bits() & pick(rng)));
}

/// Random well-typed expression over the full language (the equals function
/// included), with tree depth <= max_depth.
inline ExprPtr random_expr(std::mt19937& rng, const Vocabulary& vocab, int max_depth) {
  std::uniform_int_distribution<std::size_t> pick_const(0, vocab.size() - 1);
  if (max_depth <= 1) return Expr::constant(vocab.entries()[pick_const(rng)].label);
  std::uniform_int_distribution<int> pick_kind(0, 2);
  switch (pick_kind(rng)) {
    case 0:
      return Expr::constant(vocab.entries()[pick_const(rng)].label);
    case 1:
      return Expr::relation(random_relation(rng), random_expr(rng, vocab, max_depth - 1));
    default: {
      std::uniform_int_distribution<int> pick_op(0, 1);
      SetOp op = pick_op(rng) == 0 ? SetOp::Union : SetOp::Intersection;
      return Expr::set_op(op, random_expr(rng, vocab, max_depth - 1),
                          random_expr(rng, vocab, max_depth - 1));
    }
  }
}

inline LogicalForm random_form(std::mt19937& rng, const Vocabulary& vocab, int max_depth) {
  return LogicalForm(random_expr(rng, vocab, max_depth));
}

/// Random expression drawn from the generation grammar: no equals function,
/// no relation nesting whose composition collapses, no set operation over two
/// equal arguments, set-operation arguments in canonical order (greater
/// serialization first).
inline ExprPtr random_canonical_expr(std::mt19937& rng, const Vocabulary& vocab, int max_depth) {
  std::uniform_int_distribution<std::size_t> pick_const(0, vocab.size() - 1);
  if (max_depth <= 1) return Expr::constant(vocab.entries()[pick_const(rng)].label);
  std::uniform_int_distribution<int> pick_kind(0, 2);
  switch (pick_kind(rng)) {
    case 0:
      return Expr::constant(vocab.entries()[pick_const(rng)].label);
    case 1: {
      ExprPtr child = random_canonical_expr(rng, vocab, max_depth - 1);
      std::vector<AllenRelation> allowed;
      for (AllenRelation r : relation_inventory()) {
        if (child->kind == Expr::Kind::Relation && composition_collapses(r, child->rel)) continue;
        allowed.push_back(r);
      }
      std::uniform_int_distribution<std::size_t> pick_rel(0, allowed.size() - 1);
      return Expr::relation(allowed[pick_rel(rng)], child);
    }
    default: {
      std::uniform_int_distribution<int> pick_op(0, 1);
      SetOp op = pick_op(rng) == 0 ? SetOp::Union : SetOp::Intersection;
      ExprPtr left = random_canonical_expr(rng, vocab, max_depth - 1);
      for (int attempt = 0; attempt < 16; ++attempt) {
        ExprPtr right = random_canonical_expr(rng, vocab, max_depth - 1);
        if (expr_equal(left, right)) continue;
        if (LogicalForm(left).print() < LogicalForm(right).print()) std::swap(left, right);
        return Expr::set_op(op, left, right);
      }
      // Degenerate spaces (one constant, shallow budget) may admit no
      // distinct sibling; fall back to a non-collapsing unary application.
      std::vector<AllenRelation> allowed;
      for (AllenRelation r : relation_inventory()) {
        if (left->kind == Expr::Kind::Relation && composition_collapses(r, left->rel)) continue;
        allowed.push_back(r);
      }
      std::uniform_int_distribution<std::size_t> pick_rel(0, allowed.size() - 1);
      return Expr::relation(allowed[pick_rel(rng)], left);
    }
  }
}

inline LogicalForm random_canonical_form(std::mt19937& rng, const Vocabulary& vocab,
                                         int max_depth) {
  return LogicalForm(random_canonical_expr(rng, vocab, max_depth));
}

}  // namespace tempra::testgen
