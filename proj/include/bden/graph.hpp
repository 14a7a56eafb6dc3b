#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bden/rng.hpp"

namespace bden {

/// Identity of a vertex. Issued from a per-graph counter and never reused.
struct NodeId {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

struct NodeIdHash {
  std::size_t operator()(NodeId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};

using NodeSet = std::unordered_set<NodeId, NodeIdHash>;

enum class Mechanism { uniform, preferential };

/// Thrown on calls that indicate a logic error in the caller (unknown node,
/// self-loop request).
class GraphError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Undirected simple graph with O(1) node birth and O(deg^2) node death.
///
/// Nodes live in dense slots [0, node_count()). Removing a node moves the
/// node in the last slot into the freed slot; callers that keep per-slot
/// data alongside the graph mirror that swap. Adjacency is stored as slot
/// indices so hot loops never touch the id map.
class DynamicGraph {
 public:
  using Slot = std::uint32_t;

  NodeId add_node();

  /// Removes the node and its incident edges; returns the degree it had.
  std::size_t remove_node(NodeId node);

  /// Returns true if the edge was inserted, false if it already existed.
  bool add_edge(NodeId u, NodeId v);

  bool has_edge(NodeId u, NodeId v) const;
  bool contains(NodeId node) const { return slot_of_.contains(node); }

  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return degree_sum_ / 2; }
  std::size_t degree_sum() const noexcept { return degree_sum_; }
  std::size_t degree(NodeId node) const { return adjacency_[slot_of(node)].size(); }

  /// Neighbor ids, in insertion order modulo removals.
  std::vector<NodeId> neighbors(NodeId node) const;
  std::vector<NodeId> nodes() const { return ids_; }

  /// degree_sum / |V|; 0 for an empty graph.
  double mean_degree() const noexcept;

  std::map<std::size_t, std::size_t> degree_histogram() const;

  /// Draws min(m, |V \ exclude|) distinct nodes. Uniform: equally likely.
  /// Preferential: sequential draws without replacement weighted by current
  /// degree, uniform over the remainder once all remaining weights are zero.
  std::vector<NodeId> sample_targets(Mechanism mechanism, std::size_t m, const NodeSet& exclude,
                                     Rng& rng) const;

  // Slot-level access for the event engine.
  Slot slot_of(NodeId node) const;
  NodeId id_at(Slot slot) const { return ids_[slot]; }
  std::size_t degree_at(Slot slot) const { return adjacency_[slot].size(); }
  std::span<const Slot> neighbors_at(Slot slot) const { return adjacency_[slot]; }
  void add_edge_at(Slot u, Slot v);
  void remove_at(Slot slot);

  /// Slot version of sample_targets; nonzero `excluded[s]` bars slot s (the
  /// span may be empty). Replaces the contents of `out`.
  void sample_target_slots(Mechanism mechanism, std::size_t m,
                           std::span<const std::uint8_t> excluded, Rng& rng,
                           std::vector<Slot>& out) const;

  /// Complete graph on n fresh nodes.
  static DynamicGraph complete(std::size_t n);

 private:
  void sample_uniform(std::size_t m, std::size_t candidates,
                      std::span<const std::uint8_t> excluded, Rng& rng,
                      std::vector<Slot>& out) const;

  std::vector<NodeId> ids_;
  std::vector<std::vector<Slot>> adjacency_;
  std::unordered_map<NodeId, Slot, NodeIdHash> slot_of_;
  std::size_t degree_sum_ = 0;
  std::uint64_t next_id_ = 0;
};

}  // namespace bden
