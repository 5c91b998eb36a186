#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace credrel {

/// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of the substream addressed by `path` under `master`.
/// Pure function of (master, path); the path length is mixed in, so
/// {1} and {1, 0} address different streams.
std::uint64_t derive_substream(std::uint64_t master, std::span<const std::uint64_t> path) noexcept;
std::uint64_t derive_substream(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator, so it also
/// plugs into <random> and Boost.Random distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
};

double sample_normal(Rng& rng);

/// Gamma(shape, rate = 1) by Marsaglia–Tsang; shape < 1 uses the
/// U^{1/shape} boost.
double sample_gamma(Rng& rng, double shape);

/// Beta(alpha, beta) as a ratio of two Gamma draws. Shapes below one are
/// handled in log space so tiny shapes do not collapse to 0/0.
double sample_beta(Rng& rng, double alpha, double beta);

/// Beta draw by inversion of the CDF: monotone in the underlying uniform,
/// which couples draws across parameter values. Much slower than sample_beta.
double sample_beta_inverse(Rng& rng, double alpha, double beta);

/// Index drawn with probability proportional to weights; weights must be
/// nonnegative and sum to 1 within 1e-9 (ConfigError otherwise).
std::size_t sample_categorical(Rng& rng, std::span<const double> weights);

std::int64_t sample_binomial(Rng& rng, std::int64_t n, double p);

/// Repeated categorical draws from a fixed weight vector (cumulative table + binary search).
class CategoricalTable {
 public:
  explicit CategoricalTable(std::span<const double> weights);
  std::size_t operator()(Rng& rng) const;
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

}  // namespace credrel
