#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>

namespace bden::theory {

/// Raised when a closed form has no finite value for the inputs (for
/// example a critical ratio whose denominator is not positive).
class UndefinedThreshold : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// log(i!) via lgamma; shared by every pmf below.
double log_factorial(std::size_t i);

/// Poisson(mean) mass at i, evaluated in log space.
double poisson_pmf(double mean, std::size_t i);

/// Stationary expected population size lambda / mu.
double expected_size(double lambda, double mu);

/// Stationary probability that the population has exactly i members.
double size_pmf(double lambda, double mu, std::size_t i);

/// Stationary expected degree under uniform attachment. Equal to m for all
/// lambda and mu, which is why neither is a parameter.
double expected_degree_uc(std::size_t m);

/// Stationary degree distribution under uniform attachment: Poisson(m).
double degree_pmf_uc(std::size_t m, std::size_t i);

/// Probability that an n-step random walk on the stationary uniform-attachment
/// network is back at its start. Defined for n in {0, 1, 2}.
double return_probability(int n, std::size_t m);

/// Benefit-to-cost ratio above which fitness-driven copying favors the
/// first label: (lambda/mu - 2) / (lambda/(m mu) - 2). Throws
/// UndefinedThreshold when lambda/(m mu) <= 2.
double critical_bc(double lambda, double mu, std::size_t m);

struct NeutralBaselines {
  double one_over_expected_size;
  double one_over_initial_size;
};

/// The two neutral fixation references: 1/E[N] and 1/N(0).
NeutralBaselines neutral_baselines(double lambda, double mu, std::size_t n0);

/// ceil(mean + sigmas * sqrt(mean)); default truncation point for chains
/// whose stationary law is Poisson(mean).
std::size_t poisson_truncation(double mean, double sigmas = 12.0);

}  // namespace bden::theory
