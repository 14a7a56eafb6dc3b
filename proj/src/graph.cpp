#include "bden/graph.hpp"

#include <algorithm>
#include <string>

namespace bden {

namespace {

bool is_excluded(std::span<const std::uint8_t> excluded, DynamicGraph::Slot s) {
  return !excluded.empty() && excluded[s];
}

bool already_drawn(const std::vector<DynamicGraph::Slot>& out, DynamicGraph::Slot s) {
  return std::find(out.begin(), out.end(), s) != out.end();
}

}  // namespace

NodeId DynamicGraph::add_node() {
  const NodeId id{next_id_++};
  slot_of_.emplace(id, static_cast<Slot>(ids_.size()));
  ids_.push_back(id);
  adjacency_.emplace_back();
  return id;
}

DynamicGraph::Slot DynamicGraph::slot_of(NodeId node) const {
  auto it = slot_of_.find(node);
  if (it == slot_of_.end()) throw GraphError("unknown node " + std::to_string(node.value));
  return it->second;
}

std::size_t DynamicGraph::remove_node(NodeId node) {
  const Slot slot = slot_of(node);
  const std::size_t degree = adjacency_[slot].size();
  remove_at(slot);
  return degree;
}

void DynamicGraph::remove_at(Slot slot) {
  // Detach from every neighbor.
  for (Slot nb : adjacency_[slot]) {
    auto& list = adjacency_[nb];
    auto it = std::find(list.begin(), list.end(), slot);
    *it = list.back();
    list.pop_back();
  }
  degree_sum_ -= 2 * adjacency_[slot].size();
  slot_of_.erase(ids_[slot]);

  const Slot last = static_cast<Slot>(ids_.size() - 1);
  if (slot != last) {
    // Relabel references to the moved node.
    for (Slot nb : adjacency_[last]) {
      auto& list = adjacency_[nb];
      *std::find(list.begin(), list.end(), last) = slot;
    }
    ids_[slot] = ids_[last];
    adjacency_[slot] = std::move(adjacency_[last]);
    slot_of_[ids_[slot]] = slot;
  }
  ids_.pop_back();
  adjacency_.pop_back();
}

bool DynamicGraph::add_edge(NodeId u, NodeId v) {
  if (u == v) throw GraphError("self-loop on node " + std::to_string(u.value));
  const Slot su = slot_of(u);
  const Slot sv = slot_of(v);
  if (has_edge(u, v)) return false;
  add_edge_at(su, sv);
  return true;
}

void DynamicGraph::add_edge_at(Slot u, Slot v) {
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  degree_sum_ += 2;
}

bool DynamicGraph::has_edge(NodeId u, NodeId v) const {
  const Slot su = slot_of(u);
  const Slot sv = slot_of(v);
  // Scan the shorter list.
  const auto& a = adjacency_[su].size() <= adjacency_[sv].size() ? adjacency_[su] : adjacency_[sv];
  const Slot other = (&a == &adjacency_[su]) ? sv : su;
  return std::find(a.begin(), a.end(), other) != a.end();
}

std::vector<NodeId> DynamicGraph::neighbors(NodeId node) const {
  std::vector<NodeId> out;
  for (Slot s : adjacency_[slot_of(node)]) out.push_back(ids_[s]);
  return out;
}

double DynamicGraph::mean_degree() const noexcept {
  if (ids_.empty()) return 0.0;
  return static_cast<double>(degree_sum_) / static_cast<double>(ids_.size());
}

std::map<std::size_t, std::size_t> DynamicGraph::degree_histogram() const {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& list : adjacency_) ++hist[list.size()];
  return hist;
}

std::vector<NodeId> DynamicGraph::sample_targets(Mechanism mechanism, std::size_t m,
                                                 const NodeSet& exclude, Rng& rng) const {
  std::vector<std::uint8_t> flags;
  if (!exclude.empty()) {
    flags.assign(ids_.size(), 0);
    for (NodeId id : exclude) {
      if (auto it = slot_of_.find(id); it != slot_of_.end()) flags[it->second] = 1;
    }
  }
  std::vector<Slot> slots;
  sample_target_slots(mechanism, m, flags, rng, slots);
  std::vector<NodeId> out;
  out.reserve(slots.size());
  for (Slot s : slots) out.push_back(ids_[s]);
  return out;
}

void DynamicGraph::sample_target_slots(Mechanism mechanism, std::size_t m,
                                       std::span<const std::uint8_t> excluded, Rng& rng,
                                       std::vector<Slot>& out) const {
  out.clear();
  const std::size_t n = ids_.size();
  std::size_t candidates = n;
  for (std::uint8_t e : excluded) candidates -= e ? 1 : 0;

  if (candidates <= m) {
    for (Slot s = 0; s < n; ++s)
      if (!is_excluded(excluded, s)) out.push_back(s);
    return;
  }
  if (mechanism == Mechanism::uniform) {
    sample_uniform(m, candidates, excluded, rng, out);
    return;
  }

  std::uint64_t weight = 0;
  for (Slot s = 0; s < n; ++s)
    if (!is_excluded(excluded, s)) weight += adjacency_[s].size();

  for (std::size_t draw = 0; draw < m; ++draw) {
    if (weight == 0) {
      // Every remaining candidate is isolated.
      sample_uniform(m - draw, candidates - draw, excluded, rng, out);
      return;
    }
    const std::uint64_t r = rng.below(weight);
    std::uint64_t acc = 0;
    for (Slot s = 0; s < n; ++s) {
      if (is_excluded(excluded, s) || already_drawn(out, s)) continue;
      acc += adjacency_[s].size();
      if (acc > r) {
        out.push_back(s);
        weight -= adjacency_[s].size();
        break;
      }
    }
  }
}

void DynamicGraph::sample_uniform(std::size_t m, std::size_t candidates,
                                  std::span<const std::uint8_t> excluded, Rng& rng,
                                  std::vector<Slot>& out) const {
  const std::size_t n = ids_.size();
  const std::size_t target = out.size() + m;
  // Anything already in `out` (earlier weighted draws) is off limits.
  if (2 * candidates >= n) {
    // Dense candidates: rejection is O(m) expected.
    while (out.size() < target) {
      const Slot s = static_cast<Slot>(rng.below(n));
      if (is_excluded(excluded, s) || already_drawn(out, s)) continue;
      out.push_back(s);
    }
    return;
  }
  std::vector<Slot> pool;
  pool.reserve(candidates);
  for (Slot s = 0; s < n; ++s)
    if (!is_excluded(excluded, s) && !already_drawn(out, s)) pool.push_back(s);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
}

DynamicGraph DynamicGraph::complete(std::size_t n) {
  DynamicGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node();
  for (Slot u = 0; u < n; ++u)
    for (Slot v = u + 1; v < n; ++v) g.add_edge_at(u, v);
  return g;
}

}  // namespace bden
