#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tempra/algebra.hpp"

namespace tempra {

enum class NodeKind : std::uint8_t { Event, Timex, Reference };

std::string_view to_string(NodeKind k);
NodeKind node_kind_from_string(std::string_view s);

enum class ConsistencyStatus : std::uint8_t { Unpropagated, Consistent, Inconsistent };

std::string_view to_string(ConsistencyStatus s);

/// Dense index into one network's node table. Only meaningful for the
/// network that issued it.
struct NodeId {
  std::size_t value = 0;
  constexpr bool operator==(const NodeId&) const = default;
};

struct IntervalNode {
  NodeId id;
  NodeKind kind;
  std::string label;
};

/// Labeled complete graph over interval nodes; edge labels are RelationSets.
/// Missing information is the full set, the diagonal is pinned to {equals},
/// and both directions are kept converse-consistent. Propagation runs
/// worklist path consistency to a fixpoint.
class ConstraintNetwork {
 public:
  ConstraintNetwork() = default;

  /// Appends a node. Throws std::invalid_argument on a duplicate label.
  NodeId add_node(NodeKind kind, std::string label);

  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<IntervalNode>& nodes() const { return nodes_; }
  const IntervalNode& node(NodeId id) const;

  bool has_label(std::string_view label) const;
  NodeId node_by_label(std::string_view label) const;

  ConsistencyStatus status() const { return status_; }

  /// Intersects the (i,j) edge with r. Returns the resulting status:
  /// Inconsistent if the edge became empty, Unpropagated otherwise.
  /// Asserting on the diagonal is a no-op when r admits equals and an
  /// immediate inconsistency when it does not.
  ConsistencyStatus assert_constraint(NodeId i, NodeId j, RelationSet r);

  /// Path consistency over a worklist of changed edges; terminates because
  /// labels only shrink. Returns Inconsistent iff some edge became empty.
  ConsistencyStatus propagate();

  /// The propagated label between two nodes, direction handled via converse.
  /// Throws std::logic_error unless status() is Consistent.
  RelationSet relation_between(NodeId i, NodeId j) const;

  /// Raw edge label regardless of status. Diagonal reads {equals}.
  RelationSet edge(NodeId i, NodeId j) const;

  /// JSON relation-graph document: nodes (id, kind, label), every i<j edge
  /// with sorted relation names, and the status.
  std::string to_json(int indent = 2) const;

 private:
  std::size_t index(NodeId i, NodeId j) const { return i.value * nodes_.size() + j.value; }
  void check_id(NodeId id) const;
  void set_edge(NodeId i, NodeId j, RelationSet r);
  void enqueue(NodeId i, NodeId j);

  std::vector<IntervalNode> nodes_;
  std::unordered_map<std::string, std::size_t> by_label_;
  std::vector<RelationSet> matrix_;  // row-major, both directions mirrored
  std::deque<std::pair<std::size_t, std::size_t>> worklist_;
  std::vector<bool> queued_;
  ConsistencyStatus status_ = ConsistencyStatus::Unpropagated;
};

}  // namespace tempra
