#include "tempra/dpd.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>
#include <utility>

namespace tempra {

bool composition_collapses(AllenRelation f, AllenRelation g) {
  const RelationSet c = compose_basic(f, g);
  return c == RelationSet{f} || c == RelationSet{g};
}

namespace {

GrammarOptions grammar_options(const SearchConfig& cfg) {
  GrammarOptions opts;
  opts.include_equals = !cfg.pruning_enabled;
  return opts;
}

void check_config(const SearchConfig& cfg) {
  if (cfg.max_actions < 2) {
    throw std::invalid_argument("max_actions must be at least 2 (START plus a constant)");
  }
}

struct Candidate {
  ExprPtr expr;
  std::string print;
};

std::string print_of(const ExprPtr& e) { return LogicalForm(e).print(); }

/// Bottom-up generator of canonical forms grouped by tree cost (action length
/// minus the start production). Cost: constant 1, relation 2 + child,
/// set operation 2 + both children.
class Enumerator {
 public:
  Enumerator(const Vocabulary& vocab, const SearchConfig& cfg)
      : vocab_(vocab), pruning_(cfg.pruning_enabled),
        relations_(relation_inventory(grammar_options(cfg))) {}

  EnumerationStats run(int budget, const std::function<bool(const LogicalForm&)>& yield) {
    by_cost_.assign(static_cast<std::size_t>(budget) + 1, {});
    for (int cost = 1; cost <= budget; ++cost) {
      fill_cost(cost);
      for (const Candidate& c : by_cost_[static_cast<std::size_t>(cost)]) {
        ++stats_.yielded;
        if (!yield(LogicalForm(c.expr))) return stats_;
      }
    }
    return stats_;
  }

 private:
  void add(int cost, ExprPtr expr) {
    std::string print = print_of(expr);
    by_cost_[static_cast<std::size_t>(cost)].push_back(Candidate{std::move(expr), std::move(print)});
  }

  void fill_cost(int cost) {
    if (cost == 1) {
      for (const Vocabulary::Entry& e : vocab_.entries()) add(1, Expr::constant(e.label));
      return;
    }
    if (cost < 3) return;

    for (AllenRelation f : relations_) {
      for (const Candidate& child : by_cost_[static_cast<std::size_t>(cost - 2)]) {
        if (pruning_ && child.expr->kind == Expr::Kind::Relation &&
            composition_collapses(f, child.expr->rel)) {
          ++stats_.pruned;
          continue;
        }
        add(cost, Expr::relation(f, child.expr));
      }
    }

    for (SetOp op : {SetOp::Union, SetOp::Intersection}) {
      for (int left_cost = 1; left_cost <= (cost - 2) - left_cost; ++left_cost) {
        const int right_cost = cost - 2 - left_cost;
        const auto& lefts = by_cost_[static_cast<std::size_t>(left_cost)];
        const auto& rights = by_cost_[static_cast<std::size_t>(right_cost)];
        if (left_cost == right_cost) {
          // A set operation repeating one argument is not a canonical form,
          // independent of the pruning flag.
          for (std::size_t i = 0; i < lefts.size(); ++i) {
            for (std::size_t j = i + 1; j < lefts.size(); ++j) {
              const bool keep = lefts[i].print >= lefts[j].print;
              add(cost, Expr::set_op(op, keep ? lefts[i].expr : lefts[j].expr,
                                     keep ? lefts[j].expr : lefts[i].expr));
            }
          }
        } else {
          for (const Candidate& a : lefts) {
            for (const Candidate& b : rights) {
              const bool keep = a.print >= b.print;
              add(cost, Expr::set_op(op, keep ? a.expr : b.expr, keep ? b.expr : a.expr));
            }
          }
        }
      }
    }
  }

  const Vocabulary& vocab_;
  bool pruning_;
  std::vector<AllenRelation> relations_;
  std::vector<std::vector<Candidate>> by_cost_;
  EnumerationStats stats_;
};

}  // namespace

EnumerationStats enumerate_forms(const Vocabulary& vocab, const SearchConfig& cfg,
                                 const std::function<bool(const LogicalForm&)>& yield) {
  check_config(cfg);
  if (vocab.empty()) throw std::invalid_argument("enumeration requires a nonempty vocabulary");
  Enumerator en(vocab, cfg);
  return en.run(cfg.max_actions - 1, yield);
}

std::vector<LogicalForm> enumerate_forms(const Vocabulary& vocab, const SearchConfig& cfg) {
  std::vector<LogicalForm> out;
  enumerate_forms(vocab, cfg, [&](const LogicalForm& lf) {
    out.push_back(lf);
    return true;
  });
  return out;
}

bool matches(const Denotation& d, const GoldDenotation& gold, MatchMode mode) {
  if (d.status != ConsistencyStatus::Consistent) return false;
  for (const auto& [label, want] : gold) {
    const auto it = d.relations.find(label);
    if (it == d.relations.end()) return false;
    if (mode == MatchMode::Strict ? !(it->second == want) : !want.is_subset_of(it->second)) {
      return false;
    }
  }
  return true;
}

namespace {

constexpr std::size_t kNoClass = static_cast<std::size_t>(-1);

/// How a class member's outermost production reads; rule (b) sees only this,
/// so it partitions members consistently with the signature.
struct Flavor {
  enum class Kind : std::uint8_t { Constant, Relation, Op } kind = Kind::Constant;
  AllenRelation rel{};

  static Flavor constant() { return Flavor{}; }
  static Flavor relation(AllenRelation r) { return Flavor{Kind::Relation, r}; }
  static Flavor set_op() { return Flavor{Kind::Op, {}}; }

  int token() const {
    if (kind == Kind::Constant) return 0;
    if (kind == Kind::Op) return 1;
    return 2 + static_cast<int>(rel);
  }
};

/// One way to build members of a class from members of smaller classes.
struct Recipe {
  enum class Kind : std::uint8_t { Constant, Unary, Binary } kind = Kind::Constant;
  std::string label;       // Constant
  AllenRelation rel{};     // Unary
  SetOp op{};              // Binary
  std::size_t child_a = kNoClass;
  std::size_t child_b = kNoClass;  // Binary; child_a <= child_b (class index order)
};

struct DenotationClass {
  Denotation denotation;
  std::string signature;
  Flavor flavor;
  int min_cost = 0;
  bool finalized = false;
  std::vector<Recipe> recipes;
};

struct Member {
  ExprPtr expr;
  std::string print;
  int cost = 0;
};

class Search {
 public:
  Search(const ExecutionContext& ctx, const GoldDenotation& gold, const SearchConfig& cfg)
      : ctx_(ctx), gold_(gold), cfg_(cfg), budget_(cfg.max_actions - 1),
        relations_(relation_inventory(grammar_options(cfg))) {}

  SearchResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    seed_constants();
    discover();
    SearchResult result = collect();
    result.stats.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }

 private:
  // -- discovery ------------------------------------------------------------

  std::size_t upsert(Denotation denotation, Flavor flavor, Recipe recipe, int cost) {
    const std::pair<std::string, int> key{denotation_signature(denotation), flavor.token()};
    auto it = index_.find(key);
    std::size_t idx;
    if (it == index_.end()) {
      idx = classes_.size();
      DenotationClass cls;
      cls.signature = key.first;
      cls.denotation = std::move(denotation);
      cls.flavor = flavor;
      cls.min_cost = cost;
      classes_.push_back(std::move(cls));
      index_.emplace(key, idx);
      bucket(cost).push_back(idx);
    } else {
      idx = it->second;
      if (cost < classes_[idx].min_cost) {
        classes_[idx].min_cost = cost;
        bucket(cost).push_back(idx);
      }
    }
    classes_[idx].recipes.push_back(std::move(recipe));
    return idx;
  }

  std::vector<std::size_t>& bucket(int cost) {
    return buckets_[static_cast<std::size_t>(cost)];
  }

  void seed_constants() {
    buckets_.assign(static_cast<std::size_t>(budget_) + 1, {});

    ConstraintNetwork net;
    for (const Vocabulary::Entry& e : ctx_.vocabulary.entries()) net.add_node(e.kind, e.label);
    for (const BackgroundConstraint& bc : ctx_.background) {
      net.assert_constraint(net.node_by_label(bc.source), net.node_by_label(bc.target),
                            bc.relations);
    }
    const ConsistencyStatus status = net.propagate();

    for (const Vocabulary::Entry& e : ctx_.vocabulary.entries()) {
      Denotation d;
      d.root = e.label;
      d.status = status;
      if (status == ConsistencyStatus::Consistent) {
        const NodeId self = net.node_by_label(e.label);
        for (const Vocabulary::Entry& other : ctx_.vocabulary.entries()) {
          d.relations.emplace(other.label,
                              net.relation_between(self, net.node_by_label(other.label)));
        }
      }
      Recipe r;
      r.kind = Recipe::Kind::Constant;
      r.label = e.label;
      upsert(std::move(d), Flavor::constant(), std::move(r), 1);
    }
  }

  /// The denotation of a relation application over a class, computed on the
  /// summary network: the child collapses to one node carrying its root
  /// relations to every context node.
  Denotation apply_unary(AllenRelation f, const Denotation& child) {
    ++stats_.enumerated;
    if (child.status == ConsistencyStatus::Inconsistent) return inconsistent();

    ConstraintNetwork net;
    for (const Vocabulary::Entry& e : ctx_.vocabulary.entries()) net.add_node(e.kind, e.label);
    const NodeId sub = net.add_node(NodeKind::Reference, "sub#a");
    const NodeId root = net.add_node(NodeKind::Reference, "ref#r");
    for (const auto& [label, rels] : child.relations) {
      net.assert_constraint(sub, net.node_by_label(label), rels);
    }
    for (const BackgroundConstraint& bc : ctx_.background) {
      net.assert_constraint(net.node_by_label(bc.source), net.node_by_label(bc.target),
                            bc.relations);
    }
    net.assert_constraint(root, sub, RelationSet{f});
    return read_off(net, root);
  }

  Denotation apply_binary(SetOp op, const Denotation& a, const Denotation& b) {
    ++stats_.enumerated;
    if (a.status == ConsistencyStatus::Inconsistent ||
        b.status == ConsistencyStatus::Inconsistent) {
      return inconsistent();
    }

    ConstraintNetwork net;
    for (const Vocabulary::Entry& e : ctx_.vocabulary.entries()) net.add_node(e.kind, e.label);
    const NodeId sub_a = net.add_node(NodeKind::Reference, "sub#a");
    const NodeId sub_b = net.add_node(NodeKind::Reference, "sub#b");
    const NodeId root = net.add_node(NodeKind::Reference, "ref#r");
    for (const auto& [label, rels] : a.relations) {
      net.assert_constraint(sub_a, net.node_by_label(label), rels);
    }
    for (const auto& [label, rels] : b.relations) {
      net.assert_constraint(sub_b, net.node_by_label(label), rels);
    }
    for (const BackgroundConstraint& bc : ctx_.background) {
      net.assert_constraint(net.node_by_label(bc.source), net.node_by_label(bc.target),
                            bc.relations);
    }
    if (op == SetOp::Intersection) {
      net.assert_constraint(root, sub_a, kContainmentSet);
      net.assert_constraint(root, sub_b, kContainmentSet);
    } else {
      net.assert_constraint(sub_a, root, kContainmentSet);
      net.assert_constraint(sub_b, root, kContainmentSet);
    }
    return read_off(net, root);
  }

  Denotation read_off(ConstraintNetwork& net, NodeId root) {
    Denotation d;
    d.root = net.node(root).label;
    d.status = net.propagate();
    if (d.status == ConsistencyStatus::Consistent) {
      for (const Vocabulary::Entry& e : ctx_.vocabulary.entries()) {
        d.relations.emplace(e.label, net.relation_between(root, net.node_by_label(e.label)));
      }
    }
    return d;
  }

  static Denotation inconsistent() {
    Denotation d;
    d.status = ConsistencyStatus::Inconsistent;
    return d;
  }

  void discover() {
    for (int cost = 1; cost <= budget_; ++cost) {
      // The bucket may grow while other buckets are filled, never this one:
      // every candidate generated below costs at least cost + 2.
      for (std::size_t i = 0; i < bucket(cost).size(); ++i) {
        const std::size_t idx = bucket(cost)[i];
        if (classes_[idx].finalized || classes_[idx].min_cost != cost) continue;
        classes_[idx].finalized = true;
        extend(idx);
        finalized_.push_back(idx);
      }
    }
  }

  void extend(std::size_t idx) {
    const int base_cost = classes_[idx].min_cost;

    const Flavor flavor = classes_[idx].flavor;
    if (base_cost + 2 <= budget_) {
      for (AllenRelation f : relations_) {
        if (cfg_.pruning_enabled && flavor.kind == Flavor::Kind::Relation &&
            composition_collapses(f, flavor.rel)) {
          ++stats_.pruned;
          continue;
        }
        Recipe r;
        r.kind = Recipe::Kind::Unary;
        r.rel = f;
        r.child_a = idx;
        upsert(apply_unary(f, classes_[idx].denotation), Flavor::relation(f), std::move(r),
               base_cost + 2);
      }
    }

    for (std::size_t prev = 0; prev <= finalized_.size(); ++prev) {
      // Pairs with every earlier finalized class, plus the self pair.
      const std::size_t jdx = prev < finalized_.size() ? finalized_[prev] : idx;
      const int cost = base_cost + classes_[jdx].min_cost + 2;
      if (cost > budget_) continue;
      for (SetOp op : {SetOp::Union, SetOp::Intersection}) {
        Recipe r;
        r.kind = Recipe::Kind::Binary;
        r.op = op;
        r.child_a = std::min(idx, jdx);
        r.child_b = std::max(idx, jdx);
        upsert(apply_binary(op, classes_[idx].denotation, classes_[jdx].denotation),
               Flavor::set_op(), std::move(r), cost);
      }
    }
  }

  // -- reconstruction -------------------------------------------------------

  const std::vector<Member>& members(std::size_t idx, int limit) {
    const std::pair<std::size_t, int> key{idx, limit};
    auto it = members_memo_.find(key);
    if (it != members_memo_.end()) return it->second;

    std::vector<Member> out;
    for (const Recipe& r : classes_[idx].recipes) {
      switch (r.kind) {
        case Recipe::Kind::Constant: {
          if (limit >= 1) {
            ExprPtr e = Expr::constant(r.label);
            std::string print = print_of(e);
            out.push_back(Member{std::move(e), std::move(print), 1});
          }
          break;
        }
        case Recipe::Kind::Unary: {
          if (limit < 3) break;
          for (const Member& child : members(r.child_a, limit - 2)) {
            ExprPtr e = Expr::relation(r.rel, child.expr);
            std::string print = print_of(e);
            out.push_back(Member{std::move(e), std::move(print), child.cost + 2});
          }
          break;
        }
        case Recipe::Kind::Binary: {
          if (limit < 4) break;
          emit_pairs(r, limit, out);
          break;
        }
      }
    }
    return members_memo_.emplace(key, std::move(out)).first->second;
  }

  void emit_pairs(const Recipe& r, int limit, std::vector<Member>& out) {
    const int child_limit = limit - 2;
    if (r.child_a != r.child_b) {
      const int min_b = classes_[r.child_b].min_cost;
      const std::vector<Member> lefts = members(r.child_a, child_limit - min_b);
      for (const Member& a : lefts) {
        for (const Member& b : members(r.child_b, child_limit - a.cost)) {
          push_pair(r.op, a, b, out);
        }
      }
      return;
    }
    const std::vector<Member> all = members(r.child_a, child_limit - classes_[r.child_a].min_cost);
    for (std::size_t i = 0; i < all.size(); ++i) {
      // Same class, so only distinct members pair up; repeating one member
      // would rebuild the non-canonical (op X X).
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        if (all[i].cost + all[j].cost > child_limit) continue;
        push_pair(r.op, all[i], all[j], out);
      }
    }
  }

  static void push_pair(SetOp op, const Member& a, const Member& b, std::vector<Member>& out) {
    const bool keep = a.print >= b.print;
    const Member& first = keep ? a : b;
    const Member& second = keep ? b : a;
    ExprPtr e = Expr::set_op(op, first.expr, second.expr);
    std::string print = "(" + std::string(to_string(op)) + " " + first.print + " " +
                        second.print + ")";
    out.push_back(Member{std::move(e), std::move(print), a.cost + b.cost + 2});
  }

  SearchResult collect() {
    std::set<std::string> signatures;
    for (const DenotationClass& cls : classes_) signatures.insert(cls.signature);
    stats_.distinct_signatures = signatures.size();

    std::vector<Member> emitted;
    for (std::size_t idx = 0; idx < classes_.size(); ++idx) {
      if (!tempra::matches(classes_[idx].denotation, gold_, cfg_.match_mode)) continue;
      for (const Member& m : members(idx, budget_)) {
        const Denotation check = execute(LogicalForm(m.expr), ctx_);
        if (!tempra::matches(check, gold_, cfg_.match_mode)) {
          ++stats_.verification_failures;
          continue;
        }
        emitted.push_back(m);
      }
    }

    std::sort(emitted.begin(), emitted.end(),
              [](const Member& a, const Member& b) { return a.print < b.print; });

    SearchResult result;
    for (const Member& m : emitted) {
      if (cfg_.max_results && result.matches.size() >= *cfg_.max_results) break;
      result.matches.push_back(LogicalForm(m.expr));
    }
    result.stats = stats_;
    return result;
  }

  const ExecutionContext& ctx_;
  const GoldDenotation& gold_;
  const SearchConfig& cfg_;
  int budget_;
  std::vector<AllenRelation> relations_;

  std::vector<DenotationClass> classes_;
  std::map<std::pair<std::string, int>, std::size_t> index_;
  std::vector<std::vector<std::size_t>> buckets_;
  std::vector<std::size_t> finalized_;
  std::map<std::pair<std::size_t, int>, std::vector<Member>> members_memo_;
  SearchStats stats_;
};

}  // namespace

SearchResult search(const ExecutionContext& ctx, const GoldDenotation& gold,
                    const SearchConfig& cfg) {
  check_config(cfg);
  if (ctx.vocabulary.empty()) throw std::invalid_argument("search requires a nonempty vocabulary");
  for (const auto& [label, rels] : gold) {
    if (!ctx.vocabulary.contains(label)) {
      throw std::invalid_argument("gold references unknown label '" + label + "'");
    }
    if (!rels.is_singleton()) {
      throw std::invalid_argument("gold relation for '" + label + "' must be a single relation");
    }
  }
  Search s(ctx, gold, cfg);
  return s.run();
}

}  // namespace tempra
