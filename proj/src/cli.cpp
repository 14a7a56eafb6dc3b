#include "bden/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bden/config.hpp"
#include "bden/experiments.hpp"
#include "bden/io.hpp"
#include "bden/oracle.hpp"
#include "bden/theory.hpp"

namespace bden {

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::size_t> replicates;
  int jobs = 0;
};

struct Context {
  Options opt;
  RunConfig config;
  std::ostream& out;
  std::ostream& err;

  std::uint64_t seed() {
    if (opt.seed) return *opt.seed;
    if (config.seed) return *config.seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed: " << s << " (pass --seed " << s << " to replay)\n";
    opt.seed = s;
    return s;
  }

  std::optional<std::string> output_path() const {
    return opt.output ? opt.output : config.output_path;
  }

  std::size_t replicates() const { return opt.replicates.value_or(config.replicates); }

  // Writes to the output file, or to `out` when no path is set. Returns the
  // stream the human summary should go to.
  template <class Writer>
  std::ostream& emit(Writer&& write) {
    if (auto path = output_path()) {
      std::ofstream file(*path);
      if (!file) throw IoError("cannot write '" + *path + "'");
      write(file);
      file.flush();
      if (!file) throw IoError("write to '" + *path + "' failed");
      return out;
    }
    write(out);
    return err;
  }
};

std::string fmt(double x) { return format_number(x); }

void cmd_theory(Context& ctx) {
  const auto& c = ctx.config;
  auto& out = ctx.out;
  const double mean = theory::expected_size(c.lambda, c.mu);
  out << "E[N] = " << fmt(mean) << "  (stationary size ~ Poisson(" << fmt(mean) << "))\n";
  out << "P(N = " << static_cast<std::size_t>(mean) << ") = "
      << fmt(theory::size_pmf(c.lambda, c.mu, static_cast<std::size_t>(mean))) << "\n";
  out << "E[k] = " << fmt(theory::expected_degree_uc(c.m)) << "  (degree ~ Poisson(" << c.m
      << ") under uniform attachment)\n";
  out << "degree pmf:";
  for (std::size_t k = 0; k <= 2 * c.m; ++k)
    out << (k ? ", " : " ") << "P(" << k << ")=" << fmt(theory::degree_pmf_uc(c.m, k));
  out << "\n";
  out << "return probabilities: p0 = 1, p1 = 0, p2 = " << fmt(theory::return_probability(2, c.m))
      << "\n";
  try {
    out << "critical b/c = " << fmt(theory::critical_bc(c.lambda, c.mu, c.m));
    if (c.mechanism == Mechanism::preferential)
      out << "  (derived for uniform attachment; extrapolated)";
    out << "\n";
  } catch (const theory::UndefinedThreshold& e) {
    out << "critical b/c: undefined (" << e.what() << ")\n";
  }
  const std::size_t n0 = c.initial.type == InitialSpec::Type::complete
                             ? c.initial.n
                             : to_sim_params(c).initial_node_count();
  const auto base = theory::neutral_baselines(c.lambda, c.mu, n0);
  out << "neutral baselines: mu/lambda = " << fmt(base.one_over_expected_size)
      << ", 1/N(0) = " << fmt(base.one_over_initial_size) << "\n";
}

void cmd_simulate(Context& ctx) {
  const auto params = to_sim_params(ctx.config);
  const auto series =
      trajectory_series(params, ctx.config.t_max, ctx.config.sample_dt, ctx.seed());
  auto& summary = ctx.emit([&](std::ostream& s) { write_series_csv(s, series); });
  summary << "simulate: " << series.size() << " samples up to t = " << fmt(ctx.config.t_max)
          << ", final N = " << series.back().n << "\n";
}

void print_estimate(std::ostream& s, const FixationEstimate& e) {
  s << "p_hat = " << fmt(e.p_hat) << " (se " << fmt(e.se) << ") over " << e.replicates
    << " replicates: pure_first " << e.pure_first << ", pure_second " << e.pure_second
    << ", extinct " << e.extinct << ", timeout " << e.timeout << "\n";
  if (e.fitness_clamps > 0)
    s << "warning: fitness floor applied " << e.fitness_clamps << " times\n";
  if (e.timeout > 0) s << "warning: " << e.timeout << " replicates hit the event limit\n";
}

void cmd_fixation(Context& ctx) {
  const auto params = to_sim_params(ctx.config);
  const auto estimate = estimate_fixation(params, ctx.replicates(), ctx.seed(),
                                          ctx.config.event_limit, ctx.opt.jobs);
  const SweepCell cell{params, estimate};
  auto& summary =
      ctx.emit([&](std::ostream& s) { write_fixation_csv(s, std::span<const SweepCell>(&cell, 1)); });
  print_estimate(summary, estimate);
}

void cmd_sweep(Context& ctx) {
  if (ctx.config.sweep.empty())
    throw ConfigError("sweep", "the sweep command needs at least one axis");
  SweepSpec spec;
  spec.base = to_sim_params(ctx.config);
  spec.axes = ctx.config.sweep;
  spec.replicates = ctx.replicates();
  spec.master_seed = ctx.seed();
  spec.event_limit = ctx.config.event_limit;
  ctx.err << "sweep: " << sweep_size(spec) << " cells x " << spec.replicates << " replicates\n";
  // Validate every cell before spending time on any of them.
  for (std::size_t k = 0, n = sweep_size(spec); k < n; ++k) {
    SimParams p = spec.base;
    std::size_t rest = k;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& axis = spec.axes[a];
      p = with_parameter(std::move(p), axis.parameter, axis.values[rest % axis.values.size()]);
      rest /= axis.values.size();
    }
    p.validate();
  }
  const auto cells = run_sweep(spec, ctx.opt.jobs);
  auto& summary = ctx.emit([&](std::ostream& s) { write_fixation_csv(s, cells); });
  std::size_t timeouts = 0;
  for (const auto& cell : cells) timeouts += cell.estimate.timeout;
  summary << "sweep: " << cells.size() << " cells done";
  if (timeouts) summary << ", " << timeouts << " timeouts";
  summary << "\n";
}

void cmd_oracle(Context& ctx) {
  const auto& c = ctx.config;
  if (c.mechanism != Mechanism::uniform)
    throw oracle::Unsupported(
        "oracle: preferential attachment is not supported; the exact chains assume uniform "
        "attachment, where the state (N, A) is Markov");
  nlohmann::ordered_json doc;
  doc["lambda"] = c.lambda;
  doc["mu"] = c.mu;
  doc["m"] = c.m;

  const double mean = c.lambda / c.mu;
  const std::size_t n_max = theory::poisson_truncation(mean);
  const auto size = oracle::solve_size_chain(c.lambda, c.mu, n_max);
  double size_mean = 0.0, size_gap = 0.0;
  for (std::size_t i = 0; i < size.size(); ++i) {
    size_mean += static_cast<double>(i) * size[i];
    size_gap = std::max(size_gap, std::abs(size[i] - theory::size_pmf(c.lambda, c.mu, i)));
  }
  doc["size_chain"] = {{"n_max", n_max},
                       {"mean", size_mean},
                       {"p0", size[0]},
                       {"max_abs_diff_poisson", size_gap}};

  const std::size_t k_max = theory::poisson_truncation(static_cast<double>(c.m));
  const auto degree = oracle::solve_degree_chain(c.lambda, c.mu, c.m, k_max);
  double degree_mean = 0.0, degree_gap = 0.0;
  for (std::size_t k = 0; k < degree.size(); ++k) {
    degree_mean += static_cast<double>(k) * degree[k];
    degree_gap = std::max(degree_gap, std::abs(degree[k] - theory::degree_pmf_uc(c.m, k)));
  }
  doc["degree_chain"] = {{"k_max", k_max},
                         {"mean", degree_mean},
                         {"p0", degree[0]},
                         {"max_abs_diff_poisson", degree_gap}};

  if (c.dynamics == DynamicsKind::drift) {
    const auto params = to_sim_params(c);
    const std::size_t n0 = params.initial_node_count();
    const std::size_t a0 = c.initial_invaders;
    const std::size_t cut = std::max(n_max, n0);
    const auto sol = oracle::drift_fixation_exact(c.lambda, c.mu, c.m, c.alpha, n0, a0, cut);
    doc["drift_fixation"] = {{"alpha", c.alpha},    {"n0", n0},
                             {"a0", a0},            {"probability", sol.probability},
                             {"n_max", sol.n_max},  {"states", sol.states},
                             {"sweeps", sol.sweeps}, {"residual", sol.residual}};
  }
  const std::size_t n0 = c.initial.type == InitialSpec::Type::complete
                             ? c.initial.n
                             : to_sim_params(c).initial_node_count();
  const auto base = theory::neutral_baselines(c.lambda, c.mu, n0);
  doc["neutral_baselines"] = {{"mu_over_lambda", base.one_over_expected_size},
                              {"one_over_n0", base.one_over_initial_size}};

  const std::string text = doc.dump(2) + "\n";
  ctx.emit([&](std::ostream& s) { s << text; });
}

void cmd_stationary(Context& ctx) {
  const auto& c = ctx.config;
  if (!(c.burn_in < c.t_max)) throw ConfigError("burn_in", "must be smaller than t_max");
  const auto params = to_sim_params(c);
  // Pools trajectories only when asked to on the command line; the config
  // value is sized for fixation runs.
  const std::size_t reps = ctx.opt.replicates.value_or(1);
  const auto stats =
      stationary_statistics(params, c.burn_in, c.t_max, ctx.seed(), c.sample_dt, reps, ctx.opt.jobs);
  auto& summary = ctx.emit([&](std::ostream& s) { write_stationary_csv(s, stats); });
  summary << "stationary: " << stats.samples << " samples, mean N = " << fmt(stats.mean_size)
          << " (lambda/mu = " << fmt(c.lambda / c.mu) << "), mean degree = "
          << fmt(stats.mean_degree) << " (m = " << c.m << ")\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Birth-death evolving network simulator", "bden"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  std::uint64_t seed = 0;
  std::string output;
  std::size_t replicates = 0;
  app.add_option("--config", opt.config, "JSON configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* out_opt = app.add_option("--output", output, "output file (default: stdout)");
  auto* reps_opt = app.add_option("--replicates", replicates, "replicates per estimate")
                       ->check(CLI::PositiveNumber);
  app.add_option("--jobs", opt.jobs, "worker threads (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber);

  using Command = void (*)(Context&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"theory", "closed-form stationary quantities and thresholds", cmd_theory},
      {"simulate", "one trajectory sampled on a time grid (CSV)", cmd_simulate},
      {"fixation", "fixation probability of the first label (CSV)", cmd_fixation},
      {"sweep", "fixation probabilities over a parameter grid (CSV)", cmd_sweep},
      {"oracle", "exact chain solutions (JSON)", cmd_oracle},
      {"stationary", "stationary size and degree histograms (CSV)", cmd_stationary},
  };
  for (const auto& [name, help, _] : commands) app.add_subcommand(name, help);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  if (*seed_opt) opt.seed = seed;
  if (*out_opt) opt.output = output;
  if (*reps_opt) opt.replicates = replicates;
  if (opt.config.empty()) {
    err << "error: --config is required\n" << app.help();
    return kExitUsage;
  }

  try {
    Context ctx{opt, load_config(opt.config), out, err};
    for (const auto& [name, _, run] : commands)
      if (app.got_subcommand(name)) run(ctx);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const oracle::Unsupported& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace bden
