#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bden/dynamics.hpp"
#include "bden/graph.hpp"
#include "bden/rng.hpp"

namespace bden {

struct NoDynamics {
  bool operator==(const NoDynamics&) const = default;
};
struct DriftDynamics {
  double alpha = 0.0;
  bool operator==(const DriftDynamics&) const = default;
};
struct SelectionDynamics {
  PayoffMatrix payoff;
  double delta = kDefaultDelta;
  bool operator==(const SelectionDynamics&) const = default;
};
using Dynamics = std::variant<NoDynamics, DriftDynamics, SelectionDynamics>;

struct CompleteInitial {
  std::size_t n = 30;
};
/// Initial graph read from an edge list. `graph` is loaded once and copied
/// into every replicate.
struct EdgeListInitial {
  std::string path;
  std::shared_ptr<const DynamicGraph> graph;
};
using InitialGraph = std::variant<CompleteInitial, EdgeListInitial>;

struct SimParams {
  double lambda = 1.0;  // births per unit time
  double mu = 0.01;     // per-node death rate
  std::size_t m = 4;    // links per newcomer
  Mechanism mechanism = Mechanism::uniform;
  Dynamics dynamics = NoDynamics{};
  InitialGraph initial = CompleteInitial{};
  std::size_t initial_invaders = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  std::size_t initial_node_count() const;
};

/// Graph plus per-slot labels. `first_neighbors[s]` counts neighbors of slot
/// s holding Label::first, so payoffs cost O(1) per node.
struct PopulationState {
  DynamicGraph graph;
  std::vector<Label> labels;
  std::vector<std::uint32_t> first_neighbors;
  std::size_t count_first = 0;
  double t = 0.0;
  std::uint64_t fitness_clamps = 0;

  std::size_t size() const { return graph.node_count(); }
  Label label_of(NodeId node) const { return labels[graph.slot_of(node)]; }
  std::optional<OutcomeClass> absorbed() const { return classify(size(), count_first); }

  /// Full recount of every cached quantity. O(|V| + |E|).
  bool consistent() const;
};

struct Event {
  enum class Kind { birth, death };
  Kind kind = Kind::birth;
  NodeId node{};  // victim, for deaths
  double dt = 0.0;
};

/// Builds G(0) and assigns `initial_invaders` uniformly chosen nodes the
/// first label.
PopulationState init_state(const SimParams& params, Rng& rng);

/// Competing exponential clocks: total rate lambda + N mu.
Event sample_next_event(const PopulationState& state, const SimParams& params, Rng& rng);

/// Newcomer arrival: similarity attraction, attachment, surroundings update.
NodeId apply_birth(PopulationState& state, const SimParams& params, Rng& rng);

void apply_death(PopulationState& state, NodeId node);

struct Observation {
  double t;
  std::size_t n;
  std::size_t count_first;
  double mean_degree;
};
using Recorder = std::function<void(const Observation&)>;

struct StopCondition {
  std::optional<double> time_limit;
  bool at_absorption = false;
  std::optional<std::uint64_t> event_limit;
};

struct TrajectorySummary {
  /// kind == timeout when a limit stopped the run before absorption.
  Outcome outcome;
  double t_end = 0.0;
  std::uint64_t births = 0;
  std::uint64_t deaths = 0;
};

/// Runs events until the stop condition holds. The recorder (optional) sees
/// the initial state and then the state after every event.
TrajectorySummary run_trajectory(PopulationState& state, const SimParams& params,
                                 const StopCondition& stop, const Recorder& recorder, Rng& rng);

}  // namespace bden
