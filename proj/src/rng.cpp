#include "credrel/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "credrel/error.hpp"
#include "credrel/numerics.hpp"

namespace credrel {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

double log_gamma_variate(Rng& rng, double shape) {
  if (shape >= 1.0) return std::log(sample_gamma(rng, shape));
  return std::log(sample_gamma(rng, shape + 1.0)) + std::log(rng.uniform_open()) / shape;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_substream(std::uint64_t master, std::span<const std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(master);
  for (const std::uint64_t idx : path) h = mix64(h ^ mix64(idx * kGolden + 1));
  return mix64(h + path.size());
}

std::uint64_t derive_substream(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
  return derive_substream(master, std::span<const std::uint64_t>(path.begin(), path.size()));
}

Rng::Rng(std::uint64_t seed) noexcept : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& w : s_) {
    w = mix64(x);
    x += kGolden;
  }
}

Rng::result_type Rng::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() noexcept {
  return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
}

double sample_normal(Rng& rng) {
  boost::random::normal_distribution<double> dist;
  return dist(rng);
}

double sample_gamma(Rng& rng, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("sample_gamma shape must be positive");
  if (shape < 1.0) return sample_gamma(rng, shape + 1.0) * std::pow(rng.uniform_open(), 1.0 / shape);

  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(Rng& rng, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("sample_beta shapes must be positive");
  if (alpha >= 1.0 && beta >= 1.0) {
    const double x = sample_gamma(rng, alpha);
    const double y = sample_gamma(rng, beta);
    return x / (x + y);
  }
  const double lx = log_gamma_variate(rng, alpha);
  const double ly = log_gamma_variate(rng, beta);
  // x / (x + y) = 1 / (1 + exp(ly − lx))
  const double diff = ly - lx;
  if (diff > 0.0) {
    const double e = std::exp(-diff);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(diff));
}

double sample_beta_inverse(Rng& rng, double alpha, double beta) {
  return beta_quantile(rng.uniform_open(), alpha, beta);
}

std::size_t sample_categorical(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("weights", "categorical weights must be nonnegative");
    total += w;
  }
  if (weights.empty() || std::fabs(total - 1.0) > 1e-9)
    throw ConfigError("weights", "categorical weights must sum to 1 within 1e-9 (sum=" + std::to_string(total) + ")");
  return CategoricalTable(weights)(rng);
}

std::int64_t sample_binomial(Rng& rng, std::int64_t n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw DomainError("sample_binomial requires n >= 0 and p in [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  boost::random::binomial_distribution<std::int64_t, double> dist(n, p);
  return dist(rng);
}

CategoricalTable::CategoricalTable(std::span<const double> weights) : cumulative_(weights.size()) {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cumulative_[i] = acc;
  }
  if (!(acc > 0.0)) throw NumericalError("categorical table has no positive weight");
}

std::size_t CategoricalTable::operator()(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

}  // namespace credrel
