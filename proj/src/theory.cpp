#include "bden/theory.hpp"

#include <cmath>
#include <string>

namespace bden::theory {

namespace {

void require_rates(double lambda, double mu) {
  if (!(lambda > 0) || !(mu > 0))
    throw std::invalid_argument("lambda and mu must be positive");
}

}  // namespace

double log_factorial(std::size_t i) { return std::lgamma(static_cast<double>(i) + 1.0); }

double poisson_pmf(double mean, std::size_t i) {
  if (mean == 0.0) return i == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(i) * std::log(mean) - mean - log_factorial(i));
}

double expected_size(double lambda, double mu) {
  require_rates(lambda, mu);
  return lambda / mu;
}

double size_pmf(double lambda, double mu, std::size_t i) {
  require_rates(lambda, mu);
  return poisson_pmf(lambda / mu, i);
}

double expected_degree_uc(std::size_t m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  return static_cast<double>(m);
}

double degree_pmf_uc(std::size_t m, std::size_t i) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  return poisson_pmf(static_cast<double>(m), i);
}

double return_probability(int n, std::size_t m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  switch (n) {
    case 0: return 1.0;
    case 1: return 0.0;
    // m neighbors, each reached with 1/m, each stepping back with 1/m.
    case 2: return 1.0 / static_cast<double>(m);
    default:
      throw std::invalid_argument("return probability only defined for 0, 1 or 2 steps (got " +
                                  std::to_string(n) + ")");
  }
}

double critical_bc(double lambda, double mu, std::size_t m) {
  require_rates(lambda, mu);
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const double size = lambda / mu;
  const double p0 = return_probability(0, m);
  const double p1 = return_probability(1, m);
  const double p2 = return_probability(2, m);
  const double numerator = (p0 + p1) * size - 2.0;
  const double denominator = (p1 + p2) * size - 2.0;
  // Relative slack absorbs rounding in (1/m) * size at the boundary.
  if (!(denominator > 1e-12 * size))
    throw UndefinedThreshold("no finite critical b/c: lambda/(m mu) = " +
                             std::to_string(size / static_cast<double>(m)) + " <= 2");
  return numerator / denominator;
}

NeutralBaselines neutral_baselines(double lambda, double mu, std::size_t n0) {
  require_rates(lambda, mu);
  if (n0 < 1) throw std::invalid_argument("n0 must be >= 1");
  return {mu / lambda, 1.0 / static_cast<double>(n0)};
}

std::size_t poisson_truncation(double mean, double sigmas) {
  return static_cast<std::size_t>(std::ceil(mean + sigmas * std::sqrt(mean)));
}

}  // namespace bden::theory
