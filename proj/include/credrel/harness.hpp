#pragma once

// Reproduction experiments: synthetic ground-truth comparison of the
// imprecise hierarchical model against precise Beta-Binomial baselines, and
// wall-clock scaling sweeps with power-law fits.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "credrel/inference.hpp"
#include "credrel/model.hpp"

namespace credrel {

/// Ground-truth subdomain reliabilities and a flattened operational profile
/// OP_ij = W_i * Omega_ij, listed in domain order. `domain_sizes` groups the
/// flat list into domains.
struct GroundTruth {
  std::vector<double> theta_gt;
  std::vector<double> op_gt;
  std::vector<std::int64_t> sample_sizes;
  std::vector<std::size_t> domain_sizes;

  double system_reliability() const;
  void check() const;  // ConfigError on any violated invariant

  /// theta = (0.75, 0.65, 0.58, 0.45), OP = (0.30, 0.10, 0.20, 0.40), two
  /// domains of two, Small-N sizes (100, 500, 1000, 300); p_L = 0.586.
  static GroundTruth reference();
  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

inline const std::vector<std::int64_t> kSmallN{100, 500, 1000, 300};
inline const std::vector<std::int64_t> kLargeN{1000, 5000, 10000, 3000};

/// C_ij ~ Binomial(N_ij, theta_ij), one substream per subdomain.
std::vector<SubdomainData> generate_counts(const GroundTruth& gt, std::uint64_t seed);

struct OpScenarios {
  std::vector<double> data;    // proportional to sample sizes
  std::vector<double> approx;  // OP_gt * (1 + u), u ~ U(−noise, noise), renormalized
  std::vector<double> gt;
};

OpScenarios op_scenarios(const GroundTruth& gt, double noise, std::uint64_t seed);

/// Two-level hierarchy from flat counts and a flat profile: W_i = sum of the
/// domain's OP entries, Omega_ij = OP_ij / W_i (uniform when W_i = 0).
SystemSpec system_from_flat(const std::vector<SubdomainData>& counts, std::span<const double> op,
                            std::span<const std::size_t> domain_sizes, const HyperBox& box);

/// Type-7 quantile (linear interpolation between order statistics) of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

struct PosteriorQuantiles {
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
};

PosteriorQuantiles posterior_quantiles(std::span<const double> samples);

/// Single-posterior methods have degenerate intervals for median and error.
struct MethodSummary {
  std::string method;
  Interval median;
  Interval error;
  Interval interval_90;
};

/// One entry per configuration; with a single entry the summary collapses to
/// scalars. Envelope semantics: [min, max] of medians and of |median − gt|,
/// and [min Q_0.05, max Q_0.95].
MethodSummary summarize_quantiles(const std::string& method, std::span<const PosteriorQuantiles> per_config,
                                  double p_gt);
MethodSummary summarize_method(const std::string& method, std::span<const std::vector<double>> per_config_samples,
                               double p_gt);

inline const std::string kMethodBbUninformative = "bb-uninf";
inline const std::string kMethodBbInformative = "bb-inf";
inline const std::string kMethodImprecise = "imprecise-hier";

inline constexpr std::size_t kDefaultBaselineSamples = 40000;

struct Rq5Settings {
  GridSpec grid;
  McSpec mc;
  HyperBox box;
  double noise = 0.2;
  double kappa = 50.0;
  std::vector<std::string> methods{kMethodBbUninformative, kMethodBbInformative, kMethodImprecise};
  unsigned threads = 1;
  /// Posterior draws for each Beta-Binomial baseline (mc.samples_per_config
  /// applies to the imprecise model only).
  std::size_t baseline_samples = kDefaultBaselineSamples;
  /// Seeds count generation and profile noise; defaults to mc.master_seed.
  /// Fixing it varies only the posterior sampling between runs.
  std::optional<std::uint64_t> data_seed;
};

/// Streams used by run_rq5 for a regime's counts and for OP^approx.
std::uint64_t rq5_count_seed(const Rq5Settings& settings, std::size_t regime);
std::uint64_t rq5_profile_seed(const Rq5Settings& settings);

struct Rq5Row {
  std::size_t regime = 0;
  std::vector<std::int64_t> sample_sizes;
  std::string op;  // "data", "approx" or "gt"
  MethodSummary summary;
};

/// One row per (regime, OP scenario, method). The ground truth's own
/// sample_sizes are ignored in favor of each regime's sizes.
std::vector<Rq5Row> run_rq5(const GroundTruth& gt, const std::vector<std::vector<std::int64_t>>& regimes,
                            const Rq5Settings& settings);

// --- scaling ----------------------------------------------------------------

enum class SweepParam { domains, subdomains, configs, samples, grid };
SweepParam sweep_param_from_string(const std::string& s);  // "m", "n", "K", "S", "G"
std::string to_string(SweepParam p);

struct ScalingRecord {
  std::string parameter;
  double value = 0.0;
  double seconds = 0.0;
  std::int64_t peak_bytes = 0;
};

/// n_mu x n_nu with n_mu * n_nu == G and aspect close to 5:4.
GridSpec grid_for_size(std::size_t G, const GridSpec& base = {});

/// m domains of n subdomains, counts cycled from the reference benchmark
/// counts, uniform weights.
SystemSpec bench_system(std::size_t m, std::size_t n);

/// Baseline settings: 2 x 2 hierarchy, default grid and Monte Carlo settings.
Settings bench_baseline();

/// Times infer() single-threaded for each value, others held at `base`.
std::vector<ScalingRecord> run_scaling_sweep(SweepParam param, const std::vector<double>& values,
                                             const Settings& base);

struct PowerLawFit {
  double scale = 0.0;
  double exponent = 0.0;
};

/// Least squares of ln y on ln x: y = scale * x^exponent.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

}  // namespace credrel
