#include "tempra/network.hpp"

#include <json.hpp>

namespace tempra {

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Event: return "event";
    case NodeKind::Timex: return "timex";
    case NodeKind::Reference: return "reference";
  }
  return "?";
}

NodeKind node_kind_from_string(std::string_view s) {
  if (s == "event") return NodeKind::Event;
  if (s == "timex") return NodeKind::Timex;
  if (s == "reference") return NodeKind::Reference;
  throw std::invalid_argument("unknown node kind: '" + std::string(s) + "'");
}

std::string_view to_string(ConsistencyStatus s) {
  switch (s) {
    case ConsistencyStatus::Unpropagated: return "unpropagated";
    case ConsistencyStatus::Consistent: return "consistent";
    case ConsistencyStatus::Inconsistent: return "inconsistent";
  }
  return "?";
}

NodeId ConstraintNetwork::add_node(NodeKind kind, std::string label) {
  if (by_label_.count(label)) {
    throw std::invalid_argument("duplicate node label: '" + label + "'");
  }
  const std::size_t old_n = nodes_.size();
  const std::size_t n = old_n + 1;

  std::vector<RelationSet> grown(n * n, RelationSet::all());
  for (std::size_t i = 0; i < old_n; ++i) {
    for (std::size_t j = 0; j < old_n; ++j) grown[i * n + j] = matrix_[i * old_n + j];
  }
  grown[old_n * n + old_n] = RelationSet(AllenRelation::Equals);
  matrix_ = std::move(grown);

  std::vector<bool> queued(n * n, false);
  for (auto& [i, j] : worklist_) queued[i * n + j] = true;
  queued_ = std::move(queued);

  NodeId id{old_n};
  by_label_.emplace(label, old_n);
  nodes_.push_back(IntervalNode{id, kind, std::move(label)});
  if (status_ != ConsistencyStatus::Inconsistent) status_ = ConsistencyStatus::Unpropagated;
  return id;
}

const IntervalNode& ConstraintNetwork::node(NodeId id) const {
  check_id(id);
  return nodes_[id.value];
}

bool ConstraintNetwork::has_label(std::string_view label) const {
  return by_label_.count(std::string(label)) != 0;
}

NodeId ConstraintNetwork::node_by_label(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) {
    throw std::invalid_argument("no node labeled '" + std::string(label) + "'");
  }
  return NodeId{it->second};
}

void ConstraintNetwork::check_id(NodeId id) const {
  if (id.value >= nodes_.size()) {
    throw std::out_of_range("NodeId " + std::to_string(id.value) +
                            " outside network of " + std::to_string(nodes_.size()) +
                            " nodes");
  }
}

void ConstraintNetwork::set_edge(NodeId i, NodeId j, RelationSet r) {
  matrix_[index(i, j)] = r;
  matrix_[index(j, i)] = r.converse();
}

void ConstraintNetwork::enqueue(NodeId i, NodeId j) {
  std::size_t a = i.value, b = j.value;
  if (a > b) std::swap(a, b);
  if (queued_[a * nodes_.size() + b]) return;
  queued_[a * nodes_.size() + b] = true;
  worklist_.emplace_back(a, b);
}

ConsistencyStatus ConstraintNetwork::assert_constraint(NodeId i, NodeId j, RelationSet r) {
  check_id(i);
  check_id(j);
  if (i == j) {
    if (!r.contains(AllenRelation::Equals)) status_ = ConsistencyStatus::Inconsistent;
    return status_;
  }
  const RelationSet current = matrix_[index(i, j)];
  const RelationSet tightened = current & r;
  if (tightened == current) return status_;
  set_edge(i, j, tightened);
  if (tightened.empty()) {
    status_ = ConsistencyStatus::Inconsistent;
  } else if (status_ != ConsistencyStatus::Inconsistent) {
    status_ = ConsistencyStatus::Unpropagated;
    enqueue(i, j);
  }
  return status_;
}

ConsistencyStatus ConstraintNetwork::propagate() {
  if (status_ == ConsistencyStatus::Inconsistent) return status_;
  const std::size_t n = nodes_.size();
  while (!worklist_.empty()) {
    auto [a, b] = worklist_.front();
    worklist_.pop_front();
    queued_[a * n + b] = false;
    const NodeId i{a}, j{b};
    const RelationSet rij = matrix_[index(i, j)];
    for (std::size_t kv = 0; kv < n; ++kv) {
      if (kv == a || kv == b) continue;
      const NodeId k{kv};
      RelationSet ik = matrix_[index(i, k)];
      RelationSet tight = ik & compose(rij, matrix_[index(j, k)]);
      if (tight != ik) {
        set_edge(i, k, tight);
        if (tight.empty()) {
          status_ = ConsistencyStatus::Inconsistent;
          return status_;
        }
        enqueue(i, k);
      }
      RelationSet kj = matrix_[index(k, j)];
      tight = kj & compose(matrix_[index(k, i)], rij);
      if (tight != kj) {
        set_edge(k, j, tight);
        if (tight.empty()) {
          status_ = ConsistencyStatus::Inconsistent;
          return status_;
        }
        enqueue(k, j);
      }
    }
  }
  status_ = ConsistencyStatus::Consistent;
  return status_;
}

RelationSet ConstraintNetwork::relation_between(NodeId i, NodeId j) const {
  if (status_ != ConsistencyStatus::Consistent) {
    throw std::logic_error(std::string("relation_between requires a consistent network; status is ") +
                           std::string(to_string(status_)));
  }
  check_id(i);
  check_id(j);
  return matrix_[index(i, j)];
}

RelationSet ConstraintNetwork::edge(NodeId i, NodeId j) const {
  check_id(i);
  check_id(j);
  return matrix_[index(i, j)];
}

std::string ConstraintNetwork::to_json(int indent) const {
  nlohmann::ordered_json doc;
  doc["status"] = std::string(to_string(status_));
  auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (const IntervalNode& n : nodes_) {
    nodes.push_back({{"id", n.id.value}, {"kind", std::string(to_string(n.kind))}, {"label", n.label}});
  }
  auto& edges = doc["edges"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
      edges.push_back({{"source", nodes_[i].label},
                       {"target", nodes_[j].label},
                       {"relations", matrix_[i * nodes_.size() + j].sorted_names()}});
    }
  }
  return doc.dump(indent);
}

}  // namespace tempra
