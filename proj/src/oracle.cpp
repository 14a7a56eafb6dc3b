#include "bden/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bden::oracle {

namespace {

// Unnormalized log weights of a birth-death product form with constant up
// rate `up` and down rate i*down, extended past `n_max` until negligible.
// `required` is the smallest cut whose tail mass is within kMaxTailMass.
struct ProductForm {
  std::vector<double> log_weight;
  double tail = 0.0;
  std::size_t required = 0;
};

ProductForm product_form(double up, double down, std::size_t n_max) {
  ProductForm out;
  std::vector<double> logw{0.0};
  double peak = 0.0;
  // Terms decay super-geometrically once i > up/down; stop when 60 nats
  // below the peak.
  for (std::size_t i = 0;; ++i) {
    const double next = logw.back() + std::log(up) - std::log(static_cast<double>(i + 1) * down);
    peak = std::max(peak, next);
    logw.push_back(next);
    if (static_cast<double>(i) > up / down && next < peak - 60.0 && i + 1 > n_max) break;
  }
  double total = 0.0;
  for (double lw : logw) total += std::exp(lw - peak);
  // Mass strictly beyond each cut point, scanned from the right.
  std::vector<double> beyond(logw.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = logw.size(); i-- > 0;) {
    beyond[i] = acc / total;
    acc += std::exp(logw[i] - peak);
  }
  out.tail = beyond[n_max];
  while (beyond[out.required] > kMaxTailMass) ++out.required;
  logw.resize(n_max + 1);
  out.log_weight = std::move(logw);
  return out;
}

std::vector<double> normalized(const std::vector<double>& logw) {
  const double peak = *std::max_element(logw.begin(), logw.end());
  std::vector<double> p(logw.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) total += p[i] = std::exp(logw[i] - peak);
  for (double& x : p) x /= total;
  return p;
}

void check_tail(const ProductForm& form, std::size_t n_max, const char* what) {
  if (form.tail > kMaxTailMass)
    throw InsufficientTruncation(std::string(what) + ": truncation at " + std::to_string(n_max) +
                                     " leaves tail mass " + std::to_string(form.tail) +
                                     "; need at least " + std::to_string(form.required),
                                 form.required);
}

void require_rates(double lambda, double mu) {
  if (!(lambda > 0) || !(mu > 0)) throw std::invalid_argument("lambda and mu must be positive");
}

double log_choose(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

}  // namespace

double size_tail_mass(double lambda, double mu, std::size_t n_max) {
  require_rates(lambda, mu);
  return product_form(lambda, mu, n_max).tail;
}

std::vector<double> solve_size_chain(double lambda, double mu, std::size_t n_max) {
  require_rates(lambda, mu);
  const auto form = product_form(lambda, mu, n_max);
  check_tail(form, n_max, "size chain");
  return normalized(form.log_weight);
}

std::vector<double> solve_degree_chain(double lambda, double mu, std::size_t m,
                                       std::size_t k_max) {
  require_rates(lambda, mu);
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  // A newcomer picks the tagged node with probability m / E[N].
  const double expected_size = lambda / mu;
  const double up = static_cast<double>(m) * lambda / expected_size;
  const auto form = product_form(up, mu, k_max);
  check_tail(form, k_max, "degree chain");
  return normalized(form.log_weight);
}

double hypergeometric_pmf(std::size_t population, std::size_t successes, std::size_t draws,
                          std::size_t k) {
  if (successes > population || draws > population)
    throw std::invalid_argument("hypergeometric: parameters exceed population");
  if (k > successes || k > draws || draws - k > population - successes) return 0.0;
  return std::exp(log_choose(successes, k) + log_choose(population - successes, draws - k) -
                  log_choose(population, draws));
}

double drift_birth_split(std::size_t n, std::size_t aware, std::size_t m, double alpha) {
  if (n == 0) throw std::invalid_argument("birth split undefined for an empty population");
  const double frac = static_cast<double>(aware) / static_cast<double>(n);
  const std::size_t draws = std::min(m, n);
  double contagion = 0.0;
  for (std::size_t h = 1; h <= std::min(draws, aware); ++h)
    contagion += hypergeometric_pmf(n, aware, draws, h) *
                 (1.0 - std::pow(1.0 - alpha, static_cast<double>(h)));
  // the hypergeometric terms can sum a few ulps past 1
  return std::clamp(frac + (1.0 - frac) * contagion, 0.0, 1.0);
}

TruncatedChain::TruncatedChain(std::size_t states)
    : pending_(states), outflow_(states, 0.0), absorbing_(states, 0) {}

void TruncatedChain::add_rate(State from, State to, double rate) {
  if (rate < 0) throw std::invalid_argument("negative transition rate");
  if (rate == 0) return;
  pending_[from].push_back({to, rate});
  outflow_[from] += rate;
}

void TruncatedChain::finalize() {
  row_start_.assign(size() + 1, 0);
  entries_.clear();
  for (std::size_t s = 0; s < size(); ++s) {
    row_start_[s] = entries_.size();
    if (!absorbing(static_cast<State>(s))) {
      if (!(outflow_[s] > 0))
        throw std::logic_error("transient state " + std::to_string(s) + " has no outflow");
      entries_.insert(entries_.end(), pending_[s].begin(), pending_[s].end());
    }
  }
  row_start_[size()] = entries_.size();
  pending_.clear();
  pending_.shrink_to_fit();
}

TruncatedChain::Solution TruncatedChain::hitting_probabilities(
    const std::vector<std::uint8_t>& target, double tolerance, std::size_t max_sweeps) const {
  if (row_start_.size() != size() + 1) throw std::logic_error("chain not finalized");
  Solution sol;
  auto& h = sol.probability;
  h.assign(size(), 0.0);
  for (std::size_t s = 0; s < size(); ++s) {
    if (target[s] && !absorbing_[s]) throw std::invalid_argument("target state is not absorbing");
    if (absorbing_[s]) h[s] = target[s] ? 1.0 : 0.0;
  }
  auto row_value = [&](std::size_t s) {
    double acc = 0.0;
    for (std::size_t e = row_start_[s]; e < row_start_[s + 1]; ++e)
      acc += entries_[e].rate * h[entries_[e].to];
    return acc / outflow_[s];
  };
  for (sol.sweeps = 1; sol.sweeps <= max_sweeps; ++sol.sweeps) {
    for (std::size_t s = 0; s < size(); ++s)
      if (!absorbing_[s]) h[s] = row_value(s);
    double residual = 0.0;
    for (std::size_t s = 0; s < size(); ++s)
      if (!absorbing_[s]) residual = std::max(residual, std::abs(h[s] - row_value(s)));
    sol.residual = residual;
    if (residual < tolerance) return sol;
  }
  throw std::runtime_error("Gauss-Seidel did not converge; residual " +
                           std::to_string(sol.residual));
}

DriftChain::DriftChain(double lambda, double mu, std::size_t m, double alpha, std::size_t n_max)
    : n_max_(n_max), chain_(index(n_max, n_max) + 1) {
  require_rates(lambda, mu);
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(alpha >= 0 && alpha <= 1)) throw std::invalid_argument("alpha must be in [0, 1]");
  using State = TruncatedChain::State;
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t a = 0; a <= n; ++a) {
      const auto s = static_cast<State>(index(n, a));
      if (a == 0 || a == n) {
        chain_.set_absorbing(s);
        continue;
      }
      if (n < n_max) {
        const double q = drift_birth_split(n, a, m, alpha);
        chain_.add_rate(s, static_cast<State>(index(n + 1, a + 1)), lambda * q);
        chain_.add_rate(s, static_cast<State>(index(n + 1, a)), lambda * (1.0 - q));
      }
      const double death = static_cast<double>(n) * mu;
      const double frac = static_cast<double>(a) / static_cast<double>(n);
      chain_.add_rate(s, static_cast<State>(index(n - 1, a - 1)), death * frac);
      chain_.add_rate(s, static_cast<State>(index(n - 1, a)), death * (1.0 - frac));
    }
  }
  chain_.finalize();
}

std::vector<std::uint8_t> DriftChain::pure_aware() const {
  std::vector<std::uint8_t> mask(chain_.size(), 0);
  for (std::size_t n = 1; n <= n_max_; ++n) mask[index(n, n)] = 1;
  return mask;
}

std::vector<std::uint8_t> DriftChain::pure_unaware() const {
  std::vector<std::uint8_t> mask(chain_.size(), 0);
  for (std::size_t n = 0; n <= n_max_; ++n) mask[index(n, 0)] = 1;
  return mask;
}

FixationSolution drift_fixation_exact(double lambda, double mu, std::size_t m, double alpha,
                                      std::size_t n0, std::size_t a0, std::size_t n_max,
                                      Mechanism mechanism) {
  if (mechanism != Mechanism::uniform)
    throw Unsupported(
        "exact drift fixation needs uniform attachment; degree-weighted attachment makes the "
        "outcome depend on graph structure, not just (N, A)");
  require_rates(lambda, mu);
  if (n_max == 0) {
    const double mean = lambda / mu;
    n_max = static_cast<std::size_t>(std::ceil(mean + 12.0 * std::sqrt(mean)));
  }
  if (!(a0 >= 1 && a0 <= n0 && n0 <= n_max))
    throw std::invalid_argument("need 1 <= a0 <= n0 <= n_max");
  const auto form = product_form(lambda, mu, n_max);
  check_tail(form, n_max, "drift chain");

  DriftChain chain(lambda, mu, m, alpha, n_max);
  const auto sol = chain.chain().hitting_probabilities(chain.pure_aware());
  return {sol.probability[DriftChain::index(n0, a0)], chain.chain().size(), sol.sweeps,
          sol.residual, n_max};
}

}  // namespace bden::oracle
