#pragma once

// Special functions used by the reliability engine.

namespace credrel {

/// Natural log of the Gamma function for x > 0 (Lanczos, g = 7, 9 terms).
/// Throws DomainError for non-finite or non-positive x.
double ln_gamma(double x);

/// ln B(x, y) = ln Γ(x) + ln Γ(y) − ln Γ(x + y).
double ln_beta(double x, double y);

/// ln binom(n, k) for 0 <= k <= n.
double ln_choose(double n, double k);

/// Regularized incomplete beta I_t(alpha, beta), evaluated with a modified
/// Lentz continued fraction. The symmetry I_t(a,b) = 1 − I_{1−t}(b,a) is
/// applied when t > alpha / (alpha + beta).
double beta_cdf(double t, double alpha, double beta);

/// beta_cdf with ln B(alpha, beta) computed once, for sweeps over many t.
class BetaCdf {
 public:
  BetaCdf(double alpha, double beta);
  double operator()(double t) const;
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

 private:
  double alpha_;
  double beta_;
  double ln_beta_;
};

/// Inverse of beta_cdf in t, by bisection on the monotone CDF.
double beta_quantile(double p, double alpha, double beta);

/// ln of the Beta(alpha, beta) density at 0 < t < 1.
double beta_log_pdf(double t, double alpha, double beta);

}  // namespace credrel
