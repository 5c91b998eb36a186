#include "credrel/hyperposterior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "credrel/error.hpp"
#include "credrel/numerics.hpp"

namespace credrel {

HyperGrid build_grid(const GridSpec& spec) {
  HyperGrid g;
  g.mu.resize(spec.n_mu);
  g.mu_width.assign(spec.n_mu, 1.0 / static_cast<double>(spec.n_mu));
  for (std::size_t k = 0; k < spec.n_mu; ++k)
    g.mu[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(spec.n_mu);

  g.nu.resize(spec.n_nu);
  g.nu_width.resize(spec.n_nu);
  const double log_lo = std::log(spec.nu_min);
  const double step = (std::log(spec.nu_max) - log_lo) / static_cast<double>(spec.n_nu);
  for (std::size_t k = 0; k < spec.n_nu; ++k) {
    const double left = std::exp(log_lo + step * static_cast<double>(k));
    const double right = k + 1 == spec.n_nu ? spec.nu_max : std::exp(log_lo + step * static_cast<double>(k + 1));
    g.nu[k] = std::sqrt(left * right);
    g.nu_width[k] = right - left;
  }
  return g;
}

HyperGrid point_grid(double mu, double nu) {
  if (!(mu > 0.0 && mu < 1.0) || !(nu > 0.0)) throw DomainError("point_grid requires 0 < mu < 1 and nu > 0");
  HyperGrid g;
  g.mu = {mu};
  g.mu_width = {1.0};
  g.nu = {nu};
  g.nu_width = {1.0};
  g.weights = {1.0};
  g.log_evidence = 0.0;
  return g;
}

double log_prior_density(double mu, double nu, const HyperConfig& h) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("log_prior_density requires 0 < mu < 1");
  if (!(nu > 0.0)) throw DomainError("log_prior_density requires nu > 0");
  const double beta_part = (h.a - 1.0) * std::log(mu) + (h.b - 1.0) * std::log1p(-mu) - ln_beta(h.a, h.b);
  const double gamma_part = h.c * std::log(h.d) - ln_gamma(h.c) + (h.c - 1.0) * std::log(nu) - h.d * nu;
  return beta_part + gamma_part;
}

double log_marginal_likelihood(std::span<const SubdomainData> counts, double mu, double nu) {
  if (!(mu > 0.0 && mu < 1.0) || !(nu > 0.0))
    throw DomainError("log_marginal_likelihood requires 0 < mu < 1 and nu > 0");
  const double alpha = mu * nu;
  const double beta = (1.0 - mu) * nu;
  const double prior_norm = ln_beta(alpha, beta);
  double total = 0.0;
  for (const auto& sd : counts) {
    if (sd.total == 0) continue;
    const auto c = static_cast<double>(sd.correct);
    const auto n = static_cast<double>(sd.total);
    total += ln_choose(n, c) + ln_beta(c + alpha, n - c + beta) - prior_norm;
  }
  return total;
}

std::vector<double> grid_log_likelihood(std::span<const SubdomainData> counts, const HyperGrid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < out.size(); ++g) out[g] = log_marginal_likelihood(counts, grid.mu_at(g), grid.nu_at(g));
  return out;
}

double normalize_log_weights(std::span<const double> log_w, std::span<double> out) {
  double max_lw = -std::numeric_limits<double>::infinity();
  for (const double v : log_w)
    if (v > max_lw) max_lw = v;
  if (!std::isfinite(max_lw))
    throw NumericalError(fmt::format("posterior weights underflow: maximum log-weight is {}", max_lw));
  double sum = 0.0;
  for (std::size_t g = 0; g < log_w.size(); ++g) {
    out[g] = std::exp(log_w[g] - max_lw);
    sum += out[g];
  }
  for (auto& v : out) v /= sum;
  return max_lw + std::log(sum);
}

HyperGrid hyper_posterior(std::span<const double> log_likelihood, const HyperConfig& h, const HyperGrid& grid) {
  if (log_likelihood.size() != grid.size()) throw DomainError("log-likelihood table does not match grid size");
  HyperGrid out;
  out.mu = grid.mu;
  out.mu_width = grid.mu_width;
  out.nu = grid.nu;
  out.nu_width = grid.nu_width;

  // Separable prior: precompute the per-axis terms once.
  const double mu_norm = ln_beta(h.a, h.b);
  std::vector<double> mu_term(grid.mu.size());
  for (std::size_t k = 0; k < grid.mu.size(); ++k) {
    const double m = grid.mu[k];
    mu_term[k] = (h.a - 1.0) * std::log(m) + (h.b - 1.0) * std::log1p(-m) - mu_norm + std::log(grid.mu_width[k]);
  }
  const double nu_norm = h.c * std::log(h.d) - ln_gamma(h.c);
  std::vector<double> nu_term(grid.nu.size());
  for (std::size_t k = 0; k < grid.nu.size(); ++k) {
    const double v = grid.nu[k];
    nu_term[k] = nu_norm + (h.c - 1.0) * std::log(v) - h.d * v + std::log(grid.nu_width[k]);
  }

  std::vector<double> log_w(grid.size());
  const std::size_t n_nu = grid.nu.size();
  for (std::size_t g = 0; g < log_w.size(); ++g) log_w[g] = log_likelihood[g] + mu_term[g / n_nu] + nu_term[g % n_nu];

  out.weights.resize(grid.size());
  out.log_evidence = normalize_log_weights(log_w, out.weights);
  return out;
}

HyperGrid hyper_posterior(const DomainSpec& domain, const HyperConfig& h, const HyperGrid& grid) {
  return hyper_posterior(grid_log_likelihood(domain.subdomains, grid), h, grid);
}

double posterior_mean_mu(const HyperGrid& weighted) {
  double m = 0.0;
  for (std::size_t g = 0; g < weighted.weights.size(); ++g) m += weighted.weights[g] * weighted.mu_at(g);
  return m;
}

}  // namespace credrel
