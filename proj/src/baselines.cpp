#include "credrel/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "credrel/error.hpp"
#include "credrel/numerics.hpp"
#include "credrel/rng.hpp"

namespace credrel {

namespace {
constexpr std::int64_t kProductLimit = 10000;
}

BetaPosterior bb_update(std::int64_t correct, std::int64_t total, double prior_alpha, double prior_beta) {
  if (correct < 0 || correct > total) throw DomainError("bb_update requires 0 <= C <= N");
  if (!(prior_alpha > 0.0) || !(prior_beta > 0.0)) throw DomainError("bb_update requires a positive prior");
  return {prior_alpha + static_cast<double>(correct), prior_beta + static_cast<double>(total - correct)};
}

double bb_expected_future_reliability(const BetaPosterior& post, std::int64_t n_F) {
  if (n_F < 0) throw DomainError("horizon must be >= 0");
  if (n_F <= kProductLimit) {
    double prod = 1.0;
    for (std::int64_t k = 0; k < n_F; ++k) {
      const auto dk = static_cast<double>(k);
      prod *= (post.alpha + dk) / (post.alpha + post.beta + dk);
    }
    return prod;
  }
  return std::exp(ln_beta(post.alpha + static_cast<double>(n_F), post.beta) - ln_beta(post.alpha, post.beta));
}

Interval bb_mean_envelope(std::int64_t correct, std::int64_t total, const Interval& alpha_range,
                          const Interval& beta_range) {
  if (!(alpha_range.lo > 0.0) || !(beta_range.lo > 0.0) || alpha_range.lo > alpha_range.hi ||
      beta_range.lo > beta_range.hi)
    throw DomainError("bb_mean_envelope requires positive, ordered intervals");
  if (correct < 0 || correct > total) throw DomainError("bb_mean_envelope requires 0 <= C <= N");
  const auto c = static_cast<double>(correct);
  const auto n = static_cast<double>(total);
  auto mean = [&](double a, double b) { return (a + c) / (a + b + n); };
  // increasing in alpha, decreasing in beta
  return {mean(alpha_range.lo, beta_range.hi), mean(alpha_range.hi, beta_range.lo)};
}

BetaPosterior informative_prior(double theta_gt, double kappa) {
  if (!(theta_gt > 0.0 && theta_gt < 1.0)) throw DomainError("informative prior needs 0 < theta < 1");
  if (!(kappa > 0.0)) throw DomainError("informative prior needs kappa > 0");
  return {kappa * theta_gt, kappa * (1.0 - theta_gt)};
}

std::vector<double> bb_system_samples(const SystemSpec& system, const std::vector<BetaPosterior>& priors,
                                      std::size_t S, std::uint64_t seed) {
  if (priors.size() != subdomain_count(system)) throw DomainError("need exactly one prior per subdomain");
  std::vector<BetaPosterior> posts;
  std::vector<double> weights;
  std::size_t q = 0;
  for (std::size_t i = 0; i < system.domains.size(); ++i) {
    const auto& d = system.domains[i];
    if (d.op_weights.size() != d.subdomains.size()) throw DomainError("operational weights do not match subdomains");
    for (std::size_t j = 0; j < d.subdomains.size(); ++j, ++q) {
      posts.push_back(bb_update(d.subdomains[j].correct, d.subdomains[j].total, priors[q]));
      weights.push_back(system.domain_weights.at(i) * d.op_weights[j]);
    }
  }
  Rng rng(seed);
  std::vector<double> out(S);
  for (std::size_t s = 0; s < S; ++s) {
    double acc = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    for (std::size_t k = 0; k < posts.size(); ++k) {
      const double th = sample_beta(rng, posts[k].alpha, posts[k].beta);
      acc += weights[k] * th;
      lo = std::min(lo, th);
      hi = std::max(hi, th);
    }
    out[s] = std::clamp(acc, lo, hi);
  }
  return out;
}

}  // namespace credrel
