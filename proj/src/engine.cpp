#include "bden/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bden {

using Slot = DynamicGraph::Slot;

void SimParams::validate() const {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
  if (!(mu > 0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be > 0");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (const auto* d = std::get_if<DriftDynamics>(&dynamics)) {
    if (!(d->alpha >= 0 && d->alpha <= 1)) throw std::invalid_argument("alpha must be in [0, 1]");
  }
  if (const auto* s = std::get_if<SelectionDynamics>(&dynamics)) {
    if (!(s->delta >= 0) || !std::isfinite(s->delta)) throw std::invalid_argument("delta must be >= 0");
  }
  if (initial_invaders > initial_node_count())
    throw std::invalid_argument("initial_invaders (" + std::to_string(initial_invaders) +
                                ") exceeds initial node count (" +
                                std::to_string(initial_node_count()) + ")");
}

std::size_t SimParams::initial_node_count() const {
  if (const auto* c = std::get_if<CompleteInitial>(&initial)) return c->n;
  const auto& e = std::get<EdgeListInitial>(initial);
  if (!e.graph) throw std::invalid_argument("edge list '" + e.path + "' has not been loaded");
  return e.graph->node_count();
}

bool PopulationState::consistent() const {
  const std::size_t n = graph.node_count();
  if (labels.size() != n || first_neighbors.size() != n) return false;
  std::size_t firsts = 0;
  std::size_t degree_total = 0;
  for (Slot s = 0; s < n; ++s) {
    if (labels[s] == Label::first) ++firsts;
    std::uint32_t nb_first = 0;
    for (Slot nb : graph.neighbors_at(s)) {
      if (nb == s) return false;
      if (labels[nb] == Label::first) ++nb_first;
    }
    if (nb_first != first_neighbors[s]) return false;
    degree_total += graph.degree_at(s);
  }
  return firsts == count_first && degree_total == graph.degree_sum() &&
         degree_total % 2 == 0;
}

PopulationState init_state(const SimParams& params, Rng& rng) {
  params.validate();
  PopulationState state;
  if (const auto* c = std::get_if<CompleteInitial>(&params.initial)) {
    state.graph = DynamicGraph::complete(c->n);
  } else {
    state.graph = *std::get<EdgeListInitial>(params.initial).graph;
  }
  const std::size_t n = state.graph.node_count();
  state.labels.assign(n, Label::second);
  state.first_neighbors.assign(n, 0);

  std::vector<Slot> invaders;
  if (params.initial_invaders > 0)
    state.graph.sample_target_slots(Mechanism::uniform, params.initial_invaders, {}, rng, invaders);
  for (Slot s : invaders) {
    state.labels[s] = Label::first;
    for (Slot nb : state.graph.neighbors_at(s)) ++state.first_neighbors[nb];
  }
  state.count_first = invaders.size();
  return state;
}

Event sample_next_event(const PopulationState& state, const SimParams& params, Rng& rng) {
  const std::size_t n = state.size();
  if (n == 0) return {Event::Kind::birth, NodeId{}, rng.exponential(params.lambda)};
  const double total = params.lambda + static_cast<double>(n) * params.mu;
  const double dt = rng.exponential(total);
  if (rng.uniform() * total < params.lambda) return {Event::Kind::birth, NodeId{}, dt};
  const auto victim = static_cast<Slot>(rng.below(n));
  return {Event::Kind::death, state.graph.id_at(victim), dt};
}

namespace {

// Label the newcomer will carry, computed on the pre-arrival graph.
Label surroundings_label(PopulationState& state, const SimParams& params, Label provisional,
                         std::span<const Slot> targets, Rng& rng) {
  return std::visit(
      [&](const auto& dyn) -> Label {
        using T = std::decay_t<decltype(dyn)>;
        if constexpr (std::is_same_v<T, NoDynamics>) {
          return provisional;
        } else if constexpr (std::is_same_v<T, DriftDynamics>) {
          std::size_t aware = 0;
          for (Slot s : targets) aware += state.labels[s] == kAware ? 1 : 0;
          return drift_update(provisional, aware, dyn.alpha, rng);
        } else {
          if (targets.empty()) return provisional;
          thread_local std::vector<Competitor> competitors;
          competitors.clear();
          for (Slot s : targets) {
            const double payoff = payoff_from_counts(state.labels[s], state.first_neighbors[s],
                                                     state.graph.degree_at(s), dyn.payoff);
            const Fitness f = fitness_of(payoff, dyn.delta);
            state.fitness_clamps += f.clamped ? 1 : 0;
            competitors.push_back({state.labels[s], f.value});
          }
          return selection_update(competitors, rng);
        }
      },
      params.dynamics);
}

}  // namespace

NodeId apply_birth(PopulationState& state, const SimParams& params, Rng& rng) {
  const std::size_t n = state.size();
  const Label provisional = n == 0 ? (rng.bernoulli(0.5) ? Label::first : Label::second)
                                   : similarity_attraction(state.count_first, n, rng);

  thread_local std::vector<Slot> targets;
  state.graph.sample_target_slots(params.mechanism, params.m, {}, rng, targets);

  const Label label = surroundings_label(state, params, provisional, targets, rng);

  const NodeId id = state.graph.add_node();
  const auto slot = static_cast<Slot>(n);
  std::uint32_t first_targets = 0;
  for (Slot s : targets) {
    state.graph.add_edge_at(slot, s);
    if (state.labels[s] == Label::first) ++first_targets;
    if (label == Label::first) ++state.first_neighbors[s];
  }
  state.labels.push_back(label);
  state.first_neighbors.push_back(first_targets);
  if (label == Label::first) ++state.count_first;
  return id;
}

void apply_death(PopulationState& state, NodeId node) {
  const Slot slot = state.graph.slot_of(node);  // throws on unknown node
  const Label label = state.labels[slot];
  if (label == Label::first) {
    for (Slot nb : state.graph.neighbors_at(slot)) --state.first_neighbors[nb];
    --state.count_first;
  }
  state.graph.remove_at(slot);
  // Mirror the graph's swap-with-last slot policy.
  state.labels[slot] = state.labels.back();
  state.labels.pop_back();
  state.first_neighbors[slot] = state.first_neighbors.back();
  state.first_neighbors.pop_back();
}

TrajectorySummary run_trajectory(PopulationState& state, const SimParams& params,
                                 const StopCondition& stop, const Recorder& recorder, Rng& rng) {
  TrajectorySummary summary;
  std::uint64_t events = 0;
  auto observe = [&] {
    if (recorder)
      recorder({state.t, state.size(), state.count_first, state.graph.mean_degree()});
  };
  observe();

  for (;;) {
    if (stop.at_absorption) {
      if (auto cls = state.absorbed()) {
        summary.outcome = {*cls, state.t, events};
        break;
      }
    }
    if (stop.event_limit && events >= *stop.event_limit) {
      summary.outcome = {OutcomeClass::timeout, state.t, events};
      break;
    }
    const Event ev = sample_next_event(state, params, rng);
    if (stop.time_limit && state.t + ev.dt > *stop.time_limit) {
      state.t = *stop.time_limit;
      summary.outcome = {OutcomeClass::timeout, state.t, events};
      break;
    }
    state.t += ev.dt;
    if (ev.kind == Event::Kind::birth) {
      apply_birth(state, params, rng);
      ++summary.births;
    } else {
      apply_death(state, ev.node);
      ++summary.deaths;
    }
    ++events;
#ifndef NDEBUG
    if (!state.consistent()) throw std::logic_error("population state inconsistent after event");
#endif
    observe();
  }
  summary.t_end = state.t;
  return summary;
}

}  // namespace bden
