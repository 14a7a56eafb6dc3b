#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bden/graph.hpp"

namespace bden::oracle {

/// Truncation point too small for the requested accuracy.
class InsufficientTruncation : public std::runtime_error {
 public:
  InsufficientTruncation(const std::string& what, std::size_t required)
      : std::runtime_error(what), required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

/// Request outside what the exact solver can represent (for example
/// degree-weighted attachment, whose state is not captured by counts).
class Unsupported : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kMaxTailMass = 1e-6;

/// Stationary law of the population-size chain (up rate lambda, down rate
/// i mu) on {0..n_max}, from the birth-death product form.
std::vector<double> solve_size_chain(double lambda, double mu, std::size_t n_max);

/// Stationary law of a tagged node's degree (up rate m lambda / E[N], down
/// rate i mu) on {0..k_max}.
std::vector<double> solve_degree_chain(double lambda, double mu, std::size_t m,
                                       std::size_t k_max);

/// Stationary mass the untruncated size chain puts above `n_max`.
double size_tail_mass(double lambda, double mu, std::size_t n_max);

/// P(H = k) for H ~ Hypergeometric(population, successes, draws).
double hypergeometric_pmf(std::size_t population, std::size_t successes, std::size_t draws,
                          std::size_t k);

/// Probability that a newcomer into (N, A) ends up aware under uniform
/// attachment with random drift.
double drift_birth_split(std::size_t n, std::size_t aware, std::size_t m, double alpha);

/// Finite continuous-time chain stored as sparse rows of outgoing rates.
class TruncatedChain {
 public:
  using State = std::uint32_t;

  explicit TruncatedChain(std::size_t states);

  void add_rate(State from, State to, double rate);
  void set_absorbing(State s) { absorbing_[s] = 1; }
  /// Must be called after all add_rate calls and before solving.
  void finalize();

  std::size_t size() const { return absorbing_.size(); }
  bool absorbing(State s) const { return absorbing_[s] != 0; }
  double outflow(State s) const { return outflow_[s]; }

  struct Solution {
    std::vector<double> probability;  // per state
    std::size_t sweeps = 0;
    double residual = 0.0;  // max |row residual| / outflow over transient states
  };

  /// Probability of entering `target` (a subset of the absorbing states)
  /// before any other absorbing state, for every start state. Gauss-Seidel.
  Solution hitting_probabilities(const std::vector<std::uint8_t>& target, double tolerance = 1e-12,
                                 std::size_t max_sweeps = 2'000'000) const;

 private:
  struct Entry {
    State to;
    double rate;
  };
  std::vector<std::vector<Entry>> pending_;
  std::vector<std::size_t> row_start_;
  std::vector<Entry> entries_;
  std::vector<double> outflow_;
  std::vector<std::uint8_t> absorbing_;
};

/// The (N, A) chain of random drift under uniform attachment, truncated at
/// N = n_max with births switched off there.
class DriftChain {
 public:
  DriftChain(double lambda, double mu, std::size_t m, double alpha, std::size_t n_max);

  static std::size_t index(std::size_t n, std::size_t aware) { return n * (n + 1) / 2 + aware; }

  const TruncatedChain& chain() const { return chain_; }
  std::size_t n_max() const { return n_max_; }

  /// Absorbing classes: all-aware {A = N >= 1} and all-unaware {A = 0},
  /// the empty population counting as all-unaware.
  std::vector<std::uint8_t> pure_aware() const;
  std::vector<std::uint8_t> pure_unaware() const;

 private:
  std::size_t n_max_;
  TruncatedChain chain_;
};

struct FixationSolution {
  double probability = 0.0;
  std::size_t states = 0;
  std::size_t sweeps = 0;
  double residual = 0.0;
  std::size_t n_max = 0;
};

/// Exact probability that random drift started at (n0, a0) fixes the aware
/// label. n_max = 0 picks ceil(lambda/mu + 12 sqrt(lambda/mu)).
FixationSolution drift_fixation_exact(double lambda, double mu, std::size_t m, double alpha,
                                      std::size_t n0, std::size_t a0, std::size_t n_max = 0,
                                      Mechanism mechanism = Mechanism::uniform);

}  // namespace bden::oracle
