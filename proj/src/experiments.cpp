#include "bden/experiments.hpp"

#include <cmath>
#include <exception>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bden {

namespace {

int resolve_jobs(int jobs) {
#ifdef _OPENMP
  return jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

// Advances `state` to t_max, calling `sample(state, t)` at each grid time
// k * dt with t_from <= k * dt <= t_max. The state passed is the one in
// force at that instant.
template <typename Sample>
void sample_on_grid(PopulationState& state, const SimParams& params, double t_from, double t_max,
                    double dt, Rng& rng, Sample&& sample) {
  std::uint64_t k = static_cast<std::uint64_t>(std::ceil(t_from / dt));
  auto grid = [&] { return static_cast<double>(k) * dt; };
  for (;;) {
    const Event ev = sample_next_event(state, params, rng);
    const double t_next = state.t + ev.dt;
    while (grid() < t_next && grid() <= t_max) {
      sample(state, grid());
      ++k;
    }
    if (t_next > t_max) {
      state.t = t_max;
      return;
    }
    state.t = t_next;
    if (ev.kind == Event::Kind::birth)
      apply_birth(state, params, rng);
    else
      apply_death(state, ev.node);
  }
}

}  // namespace

FixationEstimate FixationEstimate::from_outcomes(const std::vector<ReplicateOutcome>& outcomes) {
  FixationEstimate est;
  est.replicates = outcomes.size();
  double t_total = 0.0;
  for (const auto& o : outcomes) {
    switch (o.outcome) {
      case OutcomeClass::pure_first: ++est.pure_first; break;
      case OutcomeClass::pure_second: ++est.pure_second; break;
      case OutcomeClass::extinct: ++est.extinct; break;
      case OutcomeClass::timeout: ++est.timeout; break;
    }
    est.fitness_clamps += o.fitness_clamps;
    t_total += o.t_abs;
  }
  if (est.replicates > 0) {
    const auto n = static_cast<double>(est.replicates);
    est.p_hat = static_cast<double>(est.pure_first) / n;
    est.se = std::sqrt(est.p_hat * (1.0 - est.p_hat) / n);
    est.mean_t_abs = t_total / n;
  }
  return est;
}

ReplicateOutcome run_replicate(const SimParams& params, std::uint64_t seed,
                               std::uint64_t event_limit) {
  Rng rng(seed);
  PopulationState state = init_state(params, rng);
  StopCondition stop;
  stop.at_absorption = true;
  stop.event_limit = event_limit;
  const auto summary = run_trajectory(state, params, stop, {}, rng);
  return {summary.outcome.kind, summary.outcome.t_abs, summary.outcome.events, seed,
          state.fitness_clamps};
}

std::vector<ReplicateOutcome> run_replicates_serial(const SimParams& params,
                                                    std::size_t replicates,
                                                    std::uint64_t master_seed,
                                                    std::uint64_t event_limit) {
  std::vector<ReplicateOutcome> out;
  out.reserve(replicates);
  for (std::size_t i = 0; i < replicates; ++i) {
    const std::uint64_t seed = derive_seed(master_seed, i);
    try {
      out.push_back(run_replicate(params, seed, event_limit));
    } catch (const std::exception& e) {
      throw ReplicateFailure("replicate " + std::to_string(i) + " (seed " + std::to_string(seed) +
                                 ") failed: " + e.what(),
                             i, seed);
    }
  }
  return out;
}

std::vector<ReplicateOutcome> run_replicates(const SimParams& params, std::size_t replicates,
                                             std::uint64_t master_seed,
                                             std::uint64_t event_limit, int jobs) {
  params.validate();
  std::vector<ReplicateOutcome> out(replicates);
  std::vector<std::optional<std::string>> errors(replicates);
  const auto count = static_cast<std::ptrdiff_t>(replicates);
  const int threads = resolve_jobs(jobs);

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const std::uint64_t seed = derive_seed(master_seed, idx);
    try {
      out[idx] = run_replicate(params, seed, event_limit);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }
  (void)threads;

  for (std::size_t i = 0; i < replicates; ++i) {
    if (errors[i]) {
      const std::uint64_t seed = derive_seed(master_seed, i);
      throw ReplicateFailure("replicate " + std::to_string(i) + " (seed " + std::to_string(seed) +
                                 ") failed: " + *errors[i],
                             i, seed);
    }
  }
  return out;
}

FixationEstimate estimate_fixation(const SimParams& params, std::size_t replicates,
                                   std::uint64_t master_seed, std::uint64_t event_limit,
                                   int jobs) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  return FixationEstimate::from_outcomes(
      run_replicates(params, replicates, master_seed, event_limit, jobs));
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::lambda: return "lambda";
    case SweepParameter::mu: return "mu";
    case SweepParameter::m: return "m";
    case SweepParameter::alpha: return "alpha";
    case SweepParameter::b: return "b";
    case SweepParameter::c: return "c";
    case SweepParameter::delta: return "delta";
    case SweepParameter::mechanism: return "mechanism";
    case SweepParameter::initial_invaders: return "initial_invaders";
  }
  return "?";
}

SweepParameter sweep_parameter_from_string(const std::string& name) {
  for (auto p : {SweepParameter::lambda, SweepParameter::mu, SweepParameter::m,
                 SweepParameter::alpha, SweepParameter::b, SweepParameter::c,
                 SweepParameter::delta, SweepParameter::mechanism,
                 SweepParameter::initial_invaders}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::size_t sweep_size(const SweepSpec& spec) {
  std::size_t cells = 1;
  for (const auto& axis : spec.axes) cells *= axis.values.size();
  return cells;
}

SimParams with_parameter(SimParams base, SweepParameter parameter, double value) {
  auto selection = [&]() -> SelectionDynamics& {
    auto* s = std::get_if<SelectionDynamics>(&base.dynamics);
    if (!s) throw std::invalid_argument(to_string(parameter) + " axis needs selection dynamics");
    return *s;
  };
  auto count = [&] {
    if (!(value >= 0) || value != std::floor(value))
      throw std::invalid_argument(to_string(parameter) + " must be a non-negative integer");
    return static_cast<std::size_t>(value);
  };
  switch (parameter) {
    case SweepParameter::lambda: base.lambda = value; break;
    case SweepParameter::mu: base.mu = value; break;
    case SweepParameter::m: base.m = count(); break;
    case SweepParameter::initial_invaders: base.initial_invaders = count(); break;
    case SweepParameter::alpha: {
      auto* d = std::get_if<DriftDynamics>(&base.dynamics);
      if (!d) throw std::invalid_argument("alpha axis needs drift dynamics");
      d->alpha = value;
      break;
    }
    case SweepParameter::delta: selection().delta = value; break;
    case SweepParameter::b:
    case SweepParameter::c: {
      auto& s = selection();
      if (!s.payoff.benefit_cost)
        throw std::invalid_argument("b/c axes need a payoff given as {b, c}");
      auto [b, c] = *s.payoff.benefit_cost;
      (parameter == SweepParameter::b ? b : c) = value;
      s.payoff = PayoffMatrix::prisoners_dilemma(b, c);
      break;
    }
    case SweepParameter::mechanism:
      if (value == 0)
        base.mechanism = Mechanism::uniform;
      else if (value == 1)
        base.mechanism = Mechanism::preferential;
      else
        throw std::invalid_argument("mechanism axis values are 0 (uniform) or 1 (preferential)");
      break;
  }
  return base;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec, int jobs) {
  const std::size_t cells = sweep_size(spec);
  std::vector<SweepCell> out;
  out.reserve(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    // Decode k with the last axis varying fastest.
    std::vector<double> chosen(spec.axes.size());
    std::size_t rest = k;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      chosen[a] = spec.axes[a].values[rest % spec.axes[a].values.size()];
      rest /= spec.axes[a].values.size();
    }
    std::string label;
    for (std::size_t a = 0; a < spec.axes.size(); ++a)
      label += (a ? ", " : "") + to_string(spec.axes[a].parameter) + "=" + std::to_string(chosen[a]);
    try {
      SimParams params = spec.base;
      for (std::size_t a = 0; a < spec.axes.size(); ++a)
        params = with_parameter(std::move(params), spec.axes[a].parameter, chosen[a]);
      params.validate();
      auto estimate = estimate_fixation(params, spec.replicates, derive_seed(spec.master_seed, k),
                                        spec.event_limit, jobs);
      out.push_back({std::move(params), estimate});
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep cell " + std::to_string(k) + " (" + label +
                               ") failed: " + e.what());
    }
  }
  return out;
}

std::vector<SeriesPoint> trajectory_series(const SimParams& params, double t_max,
                                           double sample_dt, std::uint64_t seed) {
  if (!(sample_dt > 0)) throw std::invalid_argument("sample_dt must be > 0");
  if (!(t_max >= 0)) throw std::invalid_argument("t_max must be >= 0");
  Rng rng(seed);
  PopulationState state = init_state(params, rng);
  std::vector<SeriesPoint> series;
  sample_on_grid(state, params, 0.0, t_max, sample_dt, rng,
                 [&](const PopulationState& s, double t) {
                   series.push_back({t, s.size(), s.count_first, s.graph.mean_degree()});
                 });
  return series;
}

StationaryStats stationary_statistics(const SimParams& params, double burn_in, double t_max,
                                      std::uint64_t seed, double sample_dt,
                                      std::size_t replicates, int jobs) {
  if (!(burn_in < t_max)) throw std::invalid_argument("burn_in must be < t_max");
  if (!(sample_dt > 0)) throw std::invalid_argument("sample_dt must be > 0");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  params.validate();

  struct Partial {
    std::vector<std::size_t> sizes;    // histogram by size
    std::vector<std::size_t> degrees;  // histogram by degree
    double size_sum = 0.0;
    double degree_sum = 0.0;
    std::size_t samples = 0;
  };
  std::vector<Partial> parts(replicates);
  std::vector<std::optional<std::string>> errors(replicates);
  const int threads = resolve_jobs(jobs);
  const auto count = static_cast<std::ptrdiff_t>(replicates);

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    auto& part = parts[static_cast<std::size_t>(r)];
    try {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
      PopulationState state = init_state(params, rng);
      sample_on_grid(state, params, burn_in, t_max, sample_dt, rng,
                     [&](const PopulationState& s, double) {
                       const std::size_t n = s.size();
                       if (part.sizes.size() <= n) part.sizes.resize(n + 1, 0);
                       ++part.sizes[n];
                       for (DynamicGraph::Slot v = 0; v < n; ++v) {
                         const std::size_t d = s.graph.degree_at(v);
                         if (part.degrees.size() <= d) part.degrees.resize(d + 1, 0);
                         ++part.degrees[d];
                       }
                       part.size_sum += static_cast<double>(n);
                       part.degree_sum += s.graph.mean_degree();
                       ++part.samples;
                     });
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(r)] = e.what();
    }
  }
  (void)threads;

  StationaryStats stats;
  double size_sum = 0.0;
  double degree_sum = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) {
    if (errors[r]) throw std::runtime_error("stationary replicate " + std::to_string(r) + ": " +
                                            *errors[r]);
    const auto& part = parts[r];
    for (std::size_t n = 0; n < part.sizes.size(); ++n)
      if (part.sizes[n]) stats.size_histogram[n] += part.sizes[n];
    for (std::size_t d = 0; d < part.degrees.size(); ++d)
      if (part.degrees[d]) stats.degree_histogram[d] += part.degrees[d];
    size_sum += part.size_sum;
    degree_sum += part.degree_sum;
    stats.samples += part.samples;
  }
  if (stats.samples > 0) {
    stats.mean_size = size_sum / static_cast<double>(stats.samples);
    stats.mean_degree = degree_sum / static_cast<double>(stats.samples);
  }
  return stats;
}

}  // namespace bden
