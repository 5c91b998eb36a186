#pragma once

// Precise-prior Beta-Binomial estimators.

#include <cstdint>
#include <vector>

#include "credrel/model.hpp"

namespace credrel {

struct BetaPosterior {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const noexcept { return alpha / (alpha + beta); }
  friend bool operator==(const BetaPosterior&, const BetaPosterior&) = default;
};

/// Conjugate update: Beta(alpha + C, beta + N − C). Throws DomainError on bad counts or prior.
BetaPosterior bb_update(std::int64_t correct, std::int64_t total, double prior_alpha, double prior_beta);
inline BetaPosterior bb_update(std::int64_t correct, std::int64_t total, const BetaPosterior& prior) {
  return bb_update(correct, total, prior.alpha, prior.beta);
}

/// E[theta^n_F] = B(alpha + n_F, beta) / B(alpha, beta)
///             = prod_{k<n_F} (alpha + k) / (alpha + beta + k).
/// Product form up to n_F = 10^4, ln B differences beyond.
double bb_expected_future_reliability(const BetaPosterior& post, std::int64_t n_F);

/// Range of the posterior mean (alpha + C) / (alpha + beta + N) over the
/// prior box; the extremes sit at corners since the mean is monotone in
/// each shape separately.
Interval bb_mean_envelope(std::int64_t correct, std::int64_t total, const Interval& alpha_range,
                          const Interval& beta_range);

/// Beta(kappa * theta, kappa * (1 − theta)): prior mean theta, concentration kappa.
BetaPosterior informative_prior(double theta_gt, double kappa);

inline constexpr double kDefaultInformativeKappa = 50.0;

/// S system-level draws under independent per-subdomain Beta posteriors:
/// p_L = sum_ij W_i Omega_ij theta_ij. `priors` is flattened in domain order
/// (one entry per subdomain).
std::vector<double> bb_system_samples(const SystemSpec& system, const std::vector<BetaPosterior>& priors,
                                      std::size_t S, std::uint64_t seed);

}  // namespace credrel
