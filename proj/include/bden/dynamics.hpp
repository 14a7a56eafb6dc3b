#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>

#include "bden/rng.hpp"

namespace bden {

/// Two-valued information state. `first` is the invading label (aware in
/// random drift, C in natural selection); `second` is the resident label.
enum class Label : std::uint8_t { first = 0, second = 1 };

inline constexpr Label kAware = Label::first;
inline constexpr Label kUnaware = Label::second;
inline constexpr Label kCooperator = Label::first;
inline constexpr Label kDefector = Label::second;

/// 2x2 game: row = own label, column = partner label.
struct PayoffMatrix {
  double R = 0, S = 0, T = 0, P = 0;
  /// Set when built from a donation game, so sweeps can vary b with fixed c.
  std::optional<std::pair<double, double>> benefit_cost;

  /// R = b - c, S = -c, T = b, P = 0. Requires b > c > 0.
  static PayoffMatrix prisoners_dilemma(double b, double c);
  static PayoffMatrix general(double R, double S, double T, double P) { return {R, S, T, P, {}}; }

  double entry(Label own, Label partner) const {
    if (own == Label::first) return partner == Label::first ? R : S;
    return partner == Label::first ? T : P;
  }

  bool operator==(const PayoffMatrix&) const = default;
};

inline constexpr double kFitnessFloor = 1e-12;
inline constexpr double kDefaultDelta = 0.01;

enum class OutcomeClass { pure_first, pure_second, extinct, timeout };

struct Outcome {
  OutcomeClass kind = OutcomeClass::timeout;
  double t_abs = 0.0;
  std::uint64_t events = 0;
};

/// Provisional label of a newcomer: `first` with probability count_first/n.
/// n must be positive; an empty population has no frequency to copy.
Label similarity_attraction(std::size_t count_first, std::size_t n, Rng& rng);

/// Random drift at birth. An aware newcomer stays aware; an unaware one runs
/// one Bernoulli(alpha) trial per aware neighbor and becomes aware on the
/// first success.
Label drift_update(Label initial, std::size_t aware_neighbors, double alpha, Rng& rng);

/// Probability that drift_update returns aware, for an unaware newcomer.
double drift_adoption_probability(std::size_t aware_neighbors, double alpha);

/// Sum over neighbors of M[own][neighbor].
double payoff_of(Label own, std::span<const Label> neighbor_labels, const PayoffMatrix& payoff);

/// Payoff of a node with the given neighbor composition; equal to payoff_of
/// over any neighbor list with that composition.
inline double payoff_from_counts(Label own, std::size_t first_neighbors, std::size_t degree,
                                 const PayoffMatrix& payoff) {
  return static_cast<double>(first_neighbors) * payoff.entry(own, Label::first) +
         static_cast<double>(degree - first_neighbors) * payoff.entry(own, Label::second);
}

struct Fitness {
  double value = 1.0;
  bool clamped = false;
};

/// f = 1 - delta + delta * payoff, floored at kFitnessFloor.
Fitness fitness_of(double payoff, double delta);

struct Competitor {
  Label label;
  double fitness;
};

/// Probability that fitness-proportional copying picks a `first` neighbor.
double selection_probability_first(std::span<const Competitor> neighbors);

/// Copies the label of neighbor j with probability f_j / sum f. Requires a
/// non-empty list of positive fitness values.
Label selection_update(std::span<const Competitor> neighbors, Rng& rng);

/// Absorption test on population counts; nullopt while both labels coexist.
std::optional<OutcomeClass> classify(std::size_t n, std::size_t count_first);

}  // namespace bden
