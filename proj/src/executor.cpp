#include "tempra/executor.hpp"

namespace tempra {

bool operator==(const Denotation& a, const Denotation& b) {
  return a.status == b.status && a.relations == b.relations;
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const ExecutionContext& ctx) {
    for (const Vocabulary::Entry& e : ctx.vocabulary.entries()) {
      network_.add_node(e.kind, e.label);
    }
  }

  NodeId fresh_reference() {
    std::string label = "ref#" + std::to_string(counter_++);
    while (network_.has_label(label)) label = "ref#" + std::to_string(counter_++);
    return network_.add_node(NodeKind::Reference, std::move(label));
  }

  NodeId eval(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::Constant:
        return network_.node_by_label(e->label);
      case Expr::Kind::Relation: {
        const NodeId child = eval(e->child);
        const NodeId ref = fresh_reference();
        network_.assert_constraint(ref, child, RelationSet{e->rel});
        return ref;
      }
      case Expr::Kind::SetOp: {
        const NodeId left = eval(e->left);
        const NodeId right = eval(e->right);
        const NodeId ref = fresh_reference();
        if (e->op == SetOp::Intersection) {
          network_.assert_constraint(ref, left, kContainmentSet);
          network_.assert_constraint(ref, right, kContainmentSet);
        } else {
          network_.assert_constraint(left, ref, kContainmentSet);
          network_.assert_constraint(right, ref, kContainmentSet);
        }
        return ref;
      }
    }
    throw std::logic_error("unreachable expression kind");
  }

  ConstraintNetwork& network() { return network_; }

 private:
  ConstraintNetwork network_;
  int counter_ = 0;
};

}  // namespace

ExecutionTrace execute_trace(const LogicalForm& lf, const ExecutionContext& ctx) {
  lf.type_check(ctx.vocabulary);

  Evaluator ev(ctx);
  const NodeId root = ev.eval(lf.root());
  ConstraintNetwork& net = ev.network();
  for (const BackgroundConstraint& bc : ctx.background) {
    net.assert_constraint(net.node_by_label(bc.source), net.node_by_label(bc.target),
                          bc.relations);
  }
  net.propagate();

  Denotation d;
  d.root = net.node(root).label;
  d.status = net.status();
  if (d.status == ConsistencyStatus::Consistent) {
    for (const Vocabulary::Entry& e : ctx.vocabulary.entries()) {
      d.relations.emplace(e.label, net.relation_between(root, net.node_by_label(e.label)));
    }
  }

  ExecutionTrace trace;
  trace.root_label = d.root;
  trace.denotation = std::move(d);
  trace.network = std::move(net);
  return trace;
}

Denotation execute(const LogicalForm& lf, const ExecutionContext& ctx) {
  return execute_trace(lf, ctx).denotation;
}

Denotation execute_actions(const ActionSequence& seq, const ExecutionContext& ctx) {
  return execute(LogicalForm::from_actions(seq), ctx);
}

std::string denotation_signature(const Denotation& d) {
  if (d.status == ConsistencyStatus::Inconsistent) return "INCONSISTENT";
  std::string out;
  bool first = true;
  for (const auto& [label, rels] : d.relations) {
    if (!first) out += ';';
    first = false;
    out += label;
    out += ':';
    out += rels.to_string();
  }
  return out;
}

}  // namespace tempra
