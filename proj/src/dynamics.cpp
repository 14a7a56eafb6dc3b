#include "bden/dynamics.hpp"

#include <cmath>
#include <string>

namespace bden {

PayoffMatrix PayoffMatrix::prisoners_dilemma(double b, double c) {
  if (!(b > c && c > 0))
    throw std::invalid_argument("prisoner's dilemma needs b > c > 0 (got b=" + std::to_string(b) +
                                ", c=" + std::to_string(c) + ")");
  return {b - c, -c, b, 0.0, std::make_pair(b, c)};
}

Label similarity_attraction(std::size_t count_first, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("similarity_attraction on an empty population");
  if (count_first > n) throw std::invalid_argument("similarity_attraction: count exceeds size");
  return rng.below(n) < count_first ? Label::first : Label::second;
}

Label drift_update(Label initial, std::size_t aware_neighbors, double alpha, Rng& rng) {
  if (initial == kAware) return kAware;
  for (std::size_t i = 0; i < aware_neighbors; ++i)
    if (rng.bernoulli(alpha)) return kAware;
  return kUnaware;
}

double drift_adoption_probability(std::size_t aware_neighbors, double alpha) {
  return 1.0 - std::pow(1.0 - alpha, static_cast<double>(aware_neighbors));
}

double payoff_of(Label own, std::span<const Label> neighbor_labels, const PayoffMatrix& payoff) {
  double total = 0.0;
  for (Label other : neighbor_labels) total += payoff.entry(own, other);
  return total;
}

Fitness fitness_of(double payoff, double delta) {
  const double f = 1.0 - delta + delta * payoff;
  if (f < kFitnessFloor) return {kFitnessFloor, true};
  return {f, false};
}

double selection_probability_first(std::span<const Competitor> neighbors) {
  double total = 0.0;
  double first = 0.0;
  for (const auto& c : neighbors) {
    total += c.fitness;
    if (c.label == Label::first) first += c.fitness;
  }
  return first / total;
}

Label selection_update(std::span<const Competitor> neighbors, Rng& rng) {
  if (neighbors.empty()) throw std::invalid_argument("selection_update needs a neighbor");
  double total = 0.0;
  for (const auto& c : neighbors) total += c.fitness;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (const auto& c : neighbors) {
    acc += c.fitness;
    if (u < acc) return c.label;
  }
  return neighbors.back().label;  // u rounded up to total
}

std::optional<OutcomeClass> classify(std::size_t n, std::size_t count_first) {
  if (n == 0) return OutcomeClass::extinct;
  if (count_first == n) return OutcomeClass::pure_first;
  if (count_first == 0) return OutcomeClass::pure_second;
  return std::nullopt;
}

}  // namespace bden
