#pragma once

// Grid posterior over a domain's latent (mu, nu) given its counts and one
// precise hyperparameter tuple.

#include <limits>
#include <span>
#include <vector>

#include "credrel/model.hpp"

namespace credrel {

/// Tensor grid over (mu, nu). Node g = i_mu * n_nu + i_nu. `weights` is empty
/// for an unweighted grid and holds normalized posterior cell masses otherwise.
struct HyperGrid {
  std::vector<double> mu;
  std::vector<double> mu_width;
  std::vector<double> nu;
  std::vector<double> nu_width;
  std::vector<double> weights;
  /// ln Pr(counts | h) up to quadrature error; NaN until weighted.
  double log_evidence = std::numeric_limits<double>::quiet_NaN();

  std::size_t size() const noexcept { return mu.size() * nu.size(); }
  std::size_t n_nu() const noexcept { return nu.size(); }
  double mu_at(std::size_t g) const { return mu[g / nu.size()]; }
  double nu_at(std::size_t g) const { return nu[g % nu.size()]; }
  double cell_measure(std::size_t g) const { return mu_width[g / nu.size()] * nu_width[g % nu.size()]; }
  bool weighted() const noexcept { return weights.size() == size() && size() > 0; }
};

/// Midpoint cells on (0,1) for mu; geometric-midpoint log cells on [nu_min, nu_max] for nu.
HyperGrid build_grid(const GridSpec& spec);

/// Single node at (mu, nu) with unit weight; the degenerate hyperprior.
HyperGrid point_grid(double mu, double nu);

/// ln[ Beta(mu | a, b) * Gamma(nu | shape c, rate d) ].
double log_prior_density(double mu, double nu, const HyperConfig& h);

/// ln Pr(C | mu, nu) = sum_j ln[ binom(N,C) B(C + mu nu, N − C + (1−mu) nu) / B(mu nu, (1−mu) nu) ].
double log_marginal_likelihood(std::span<const SubdomainData> counts, double mu, double nu);

/// log_marginal_likelihood at every grid node. Independent of the hyperparameters,
/// so one table serves every configuration of a domain.
std::vector<double> grid_log_likelihood(std::span<const SubdomainData> counts, const HyperGrid& grid);

/// Normalized posterior weights on `grid`:
///   w_g ∝ exp(loglik_g + log_prior_g) * cell_measure_g
/// with max-subtraction before exponentiation. Throws NumericalError when
/// no finite log-weight exists.
HyperGrid hyper_posterior(std::span<const double> log_likelihood, const HyperConfig& h, const HyperGrid& grid);
HyperGrid hyper_posterior(const DomainSpec& domain, const HyperConfig& h, const HyperGrid& grid);

/// Normalizes log-weights in place into probabilities; returns ln(sum exp(log_w)).
double normalize_log_weights(std::span<const double> log_w, std::span<double> out);

double posterior_mean_mu(const HyperGrid& weighted);

}  // namespace credrel
