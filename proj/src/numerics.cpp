#include "credrel/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "credrel/error.hpp"

namespace credrel {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double lanczos_ln_gamma(double x) {
  // valid for x >= 0.5
  x -= 1.0;
  double sum = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) sum += kLanczosCoef[i] / (x + static_cast<double>(i));
  const double t = x + kLanczosG + 0.5;
  return kHalfLog2Pi + (x + 0.5) * std::log(t) - t + std::log(sum);
}

// Continued fraction for I_x(a,b) without the prefactor (Numerical Recipes form).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 200000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double dm = static_cast<double>(m);
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
                       ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

void require_shape(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) throw DomainError(std::string(what) + " must be finite and positive");
}

}  // namespace

double ln_gamma(double x) {
  require_shape(x, "ln_gamma argument");
  if (x < 0.5) {
    // reflection: Γ(x)Γ(1−x) = π / sin(πx)
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - lanczos_ln_gamma(1.0 - x);
  }
  return lanczos_ln_gamma(x);
}

double ln_beta(double x, double y) {
  require_shape(x, "ln_beta argument");
  require_shape(y, "ln_beta argument");
  return ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
}

double ln_choose(double n, double k) {
  if (!(k >= 0.0) || !(k <= n)) throw DomainError("ln_choose requires 0 <= k <= n");
  if (k == 0.0 || k == n) return 0.0;
  return ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
}

BetaCdf::BetaCdf(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  require_shape(alpha, "beta_cdf alpha");
  require_shape(beta, "beta_cdf beta");
  ln_beta_ = ln_beta(alpha, beta);
}

double BetaCdf::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("beta_cdf requires t in [0,1]");
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;

  const double log_front = alpha_ * std::log(t) + beta_ * std::log1p(-t) - ln_beta_;
  if (t <= alpha_ / (alpha_ + beta_)) {
    return std::exp(log_front) * beta_continued_fraction(alpha_, beta_, t) / alpha_;
  }
  const double upper = std::exp(log_front) * beta_continued_fraction(beta_, alpha_, 1.0 - t) / beta_;
  return 1.0 - upper;
}

double beta_cdf(double t, double alpha, double beta) { return BetaCdf(alpha, beta)(t); }

double beta_quantile(double p, double alpha, double beta) {
  require_shape(alpha, "beta_quantile alpha");
  require_shape(beta, "beta_quantile beta");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("beta_quantile requires p in [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (beta_cdf(mid, alpha, beta) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double beta_log_pdf(double t, double alpha, double beta) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("beta_log_pdf requires 0 < t < 1");
  return (alpha - 1.0) * std::log(t) + (beta - 1.0) * std::log1p(-t) - ln_beta(alpha, beta);
}

}  // namespace credrel
