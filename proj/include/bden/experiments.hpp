#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bden/engine.hpp"

namespace bden {

inline constexpr std::uint64_t kDefaultEventLimit = 50'000'000;

struct ReplicateOutcome {
  OutcomeClass outcome = OutcomeClass::timeout;
  double t_abs = 0.0;
  std::uint64_t events = 0;
  std::uint64_t seed = 0;
  std::uint64_t fitness_clamps = 0;
};

struct FixationEstimate {
  double p_hat = 0.0;
  std::size_t replicates = 0;
  std::size_t pure_first = 0;
  std::size_t pure_second = 0;
  std::size_t extinct = 0;
  std::size_t timeout = 0;
  double se = 0.0;
  std::uint64_t fitness_clamps = 0;
  double mean_t_abs = 0.0;

  static FixationEstimate from_outcomes(const std::vector<ReplicateOutcome>& outcomes);
};

/// A replicate threw. Carries the seed so the run can be replayed alone.
class ReplicateFailure : public std::runtime_error {
 public:
  ReplicateFailure(const std::string& what, std::size_t index, std::uint64_t seed)
      : std::runtime_error(what), index_(index), seed_(seed) {}
  std::size_t index() const noexcept { return index_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t index_;
  std::uint64_t seed_;
};

/// One trajectory from G(0) to absorption or `event_limit` events.
ReplicateOutcome run_replicate(const SimParams& params, std::uint64_t seed,
                               std::uint64_t event_limit);

/// Replicate i uses seed derive_seed(master_seed, i). `jobs` = 0 keeps the
/// OpenMP default; results do not depend on it.
std::vector<ReplicateOutcome> run_replicates(const SimParams& params, std::size_t replicates,
                                             std::uint64_t master_seed,
                                             std::uint64_t event_limit, int jobs = 0);

/// Plain loop over the same replicates; reference for run_replicates.
std::vector<ReplicateOutcome> run_replicates_serial(const SimParams& params,
                                                    std::size_t replicates,
                                                    std::uint64_t master_seed,
                                                    std::uint64_t event_limit);

FixationEstimate estimate_fixation(const SimParams& params, std::size_t replicates,
                                   std::uint64_t master_seed,
                                   std::uint64_t event_limit = kDefaultEventLimit, int jobs = 0);

enum class SweepParameter { lambda, mu, m, alpha, b, c, delta, mechanism, initial_invaders };

std::string to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(const std::string& name);

/// Mechanism values are encoded as 0 (uniform) and 1 (preferential).
struct SweepAxis {
  SweepParameter parameter;
  std::vector<double> values;
  bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
  SimParams base;
  std::vector<SweepAxis> axes;
  std::size_t replicates = 1500;
  std::uint64_t master_seed = 0;
  std::uint64_t event_limit = kDefaultEventLimit;
};

struct SweepCell {
  SimParams params;
  FixationEstimate estimate;
};

/// Number of cells in the cartesian product of the axes.
std::size_t sweep_size(const SweepSpec& spec);

/// Returns `base` with one parameter overridden. b and c rebuild a donation
/// game payoff and need selection dynamics.
SimParams with_parameter(SimParams base, SweepParameter parameter, double value);

/// Cells in row-major order (last axis fastest); cell k draws its replicate
/// seeds from derive_seed(master_seed, k).
std::vector<SweepCell> run_sweep(const SweepSpec& spec, int jobs = 0);

struct SeriesPoint {
  double t;
  std::size_t n;
  std::size_t count_first;
  double mean_degree;
};

/// State sampled at clock values 0, dt, 2 dt, ... <= t_max.
std::vector<SeriesPoint> trajectory_series(const SimParams& params, double t_max,
                                           double sample_dt, std::uint64_t seed);

struct StationaryStats {
  std::map<std::size_t, std::size_t> size_histogram;
  std::map<std::size_t, std::size_t> degree_histogram;
  double mean_size = 0.0;
  double mean_degree = 0.0;
  std::size_t samples = 0;
};

/// Samples at clock multiples of sample_dt in [burn_in, t_max], pooled over
/// `replicates` independent trajectories seeded from derive_seed(seed, r).
StationaryStats stationary_statistics(const SimParams& params, double burn_in, double t_max,
                                      std::uint64_t seed, double sample_dt = 1.0,
                                      std::size_t replicates = 1, int jobs = 0);

}  // namespace bden
