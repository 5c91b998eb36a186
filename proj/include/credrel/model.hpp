#pragma once

// Hierarchy data model: counts, operational-profile weights, hyperparameter
// boxes and numerical settings.

#include <cstdint>
#include <string>
#include <vector>

#include "credrel/error.hpp"

namespace credrel {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  double width() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Precise hyperparameter tuple: mu ~ Beta(a, b), nu ~ Gamma(c, rate = d).
struct HyperConfig {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double d = 1.0;
  friend bool operator==(const HyperConfig&, const HyperConfig&) = default;
};

/// Admissible set of hyperparameters; defaults are the baseline ranges
/// a, b in [1, 12] and c, d in [1, 25].
struct HyperBox {
  Interval a{1.0, 12.0};
  Interval b{1.0, 12.0};
  Interval c{1.0, 25.0};
  Interval d{1.0, 25.0};

  static HyperBox point(const HyperConfig& h) { return {{h.a, h.a}, {h.b, h.b}, {h.c, h.c}, {h.d, h.d}}; }
  bool contains(const HyperConfig& h) const noexcept {
    return a.contains(h.a) && b.contains(h.b) && c.contains(h.c) && d.contains(h.d);
  }
  friend bool operator==(const HyperBox&, const HyperBox&) = default;
};

struct SubdomainData {
  std::string label;
  std::int64_t correct = 0;
  std::int64_t total = 0;
  friend bool operator==(const SubdomainData&, const SubdomainData&) = default;
};

struct DomainSpec {
  std::string label;
  std::vector<SubdomainData> subdomains;
  std::vector<double> op_weights;  // Ω_ij, one per subdomain
  HyperBox box;
  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

struct SystemSpec {
  std::vector<DomainSpec> domains;
  std::vector<double> domain_weights;  // W_i, one per domain
  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// (mu, nu) quadrature grid. G = n_mu * n_nu must be >= 4, except that a
/// 1x1 grid is accepted as an explicit point-mass hyperprior.
struct GridSpec {
  std::size_t n_mu = 50;
  std::size_t n_nu = 40;
  double nu_min = 0.05;
  double nu_max = 150.0;

  std::size_t size() const noexcept { return n_mu * n_nu; }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917ULL;

struct McSpec {
  std::size_t samples_per_config = 3000;  // S
  std::size_t configs_per_domain = 160;   // K
  std::size_t pairing_cap = 512;          // K_total
  std::uint64_t master_seed = kDefaultSeed;
  std::size_t t_grid_size = 201;  // T
  friend bool operator==(const McSpec&, const McSpec&) = default;
};

struct ReliabilityQuery {
  std::vector<std::int64_t> horizons{1, 10, 100};
  /// Also build per-horizon CDF envelopes of R(n_F) (root transform of the p CDFs).
  bool horizon_cdfs = false;
  friend bool operator==(const ReliabilityQuery&, const ReliabilityQuery&) = default;
};

struct Settings {
  SystemSpec system;
  GridSpec grid;
  McSpec mc;
  ReliabilityQuery query;
  friend bool operator==(const Settings&, const Settings&) = default;
};

inline constexpr double kWeightRenormTolerance = 1e-6;

/// Every invariant violation, each with a path like "system.domains[1].omega".
std::vector<ValidationIssue> collect_issues(const SystemSpec& system, const GridSpec& grid, const McSpec& mc,
                                            const ReliabilityQuery& query = {});

/// Checks all invariants and returns a copy with weight vectors renormalized
/// when their sum is within 1e-6 of one. Throws ConfigError listing every
/// violation. Idempotent.
Settings validate(const SystemSpec& system, const GridSpec& grid, const McSpec& mc,
                  const ReliabilityQuery& query = {});
Settings validate(const Settings& settings);

/// Total number of subdomains across domains.
std::size_t subdomain_count(const SystemSpec& system) noexcept;

}  // namespace credrel
