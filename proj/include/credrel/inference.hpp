#pragma once

// Imprecise hierarchical reliability engine: configuration generation, grid
// mixtures at the subdomain level, Monte Carlo propagation to domain and
// system level, CDF envelopes and future-reliability transforms.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "credrel/hyperposterior.hpp"
#include "credrel/memory.hpp"
#include "credrel/model.hpp"

namespace credrel {

/// T thresholds uniform and inclusive on [0, 1].
struct EvalGrid {
  std::vector<double> t;

  static EvalGrid uniform(std::size_t size);
  std::size_t size() const noexcept { return t.size(); }
  friend bool operator==(const EvalGrid&, const EvalGrid&) = default;
};

/// Pointwise envelope of a family of CDFs on a shared EvalGrid.
struct CdfEnvelope {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::vector<double>> members;  // optional
  friend bool operator==(const CdfEnvelope&, const CdfEnvelope&) = default;
};

/// Envelope of E[R(n_F)] over the configuration family, per horizon.
struct ReliabilityCurve {
  std::vector<std::int64_t> horizons;
  std::vector<double> expected_lower;
  std::vector<double> expected_upper;
  std::vector<CdfEnvelope> cdfs;  // per horizon, when requested
  friend bool operator==(const ReliabilityCurve&, const ReliabilityCurve&) = default;
};

// --- configuration family ---------------------------------------------------

/// K configurations inside `box`. For K >= 16 the 16 corners come first (in
/// bit order a, b, c, d) and the rest are seeded uniform draws; for K < 16
/// all K are seeded uniform draws.
std::vector<HyperConfig> generate_configs(const HyperBox& box, std::size_t K, std::uint64_t seed);

/// 64-bit key of a configuration's exact value; used in sampling seed paths
/// so a configuration always gets the same stream within a domain.
std::uint64_t config_key(const HyperConfig& h) noexcept;

// --- subdomain level (deterministic quadrature) -----------------------------

/// F(t) = sum_g w_g I_t(C + mu_g nu_g, N − C + (1 − mu_g) nu_g).
/// Cells with weight below 1e-15 are skipped and the kept mass renormalized.
std::vector<double> subdomain_marginal_cdf(const DomainSpec& domain, std::size_t j, const HyperGrid& weighted,
                                           const EvalGrid& t);

/// E[theta_ij^n] for each sorted horizon under the same mixture:
/// sum_g w_g prod_{k<n} (alpha_g + k) / (alpha_g + beta_g + k).
std::vector<double> subdomain_expected_reliability(const DomainSpec& domain, std::size_t j,
                                                   const HyperGrid& weighted,
                                                   std::span<const std::int64_t> horizons);

// --- domain level (Monte Carlo) ---------------------------------------------

struct DomainSamples {
  std::size_t subdomains = 0;
  std::size_t samples = 0;
  std::vector<double> theta;  // subdomain-major: theta[j * samples + s]
  std::vector<double> p;      // p_i = sum_j Omega_ij theta_ij

  std::span<const double> theta_of(std::size_t j) const { return {theta.data() + j * samples, samples}; }
};

/// S draws: cell ~ categorical(weights), theta_ij ~ Beta(C + mu nu, N − C + (1 − mu) nu)
/// independently per j, p_i = sum_j Omega_ij theta_ij.
DomainSamples sample_domain(const DomainSpec& domain, const HyperGrid& weighted, std::size_t S, std::uint64_t seed);

/// Samplewise convex combination, clamped to [min_j theta, max_j theta] so
/// rounding never leaves the hull.
std::vector<double> aggregate_domain(const DomainSamples& samples, std::span<const double> weights);

// --- system level -----------------------------------------------------------

/// Full Cartesian product of config indices when it has at most `cap` tuples
/// (lexicographic order); otherwise `cap` distinct tuples drawn uniformly,
/// returned in lexicographic order.
std::vector<std::vector<std::size_t>> generate_pairings(std::span<const std::size_t> config_counts,
                                                        std::size_t cap, std::uint64_t seed);

/// p_L^(s) = sum_i W_i p_i^(s), index aligned, clamped to [min_i p_i, max_i p_i].
std::vector<double> sample_system(std::span<const double> domain_weights,
                                  const std::vector<std::span<const double>>& domain_p);

// --- CDF utilities ----------------------------------------------------------

/// F(t_k) = #{samples <= t_k} / S.
std::vector<double> empirical_cdf(std::span<const double> samples, const EvalGrid& t);

CdfEnvelope envelope(std::span<const std::vector<double>> members, bool keep_members = false);

/// F_R(t) = F_p(t^{1/n_F}) with linear interpolation between grid points.
std::vector<double> reliability_cdf(std::span<const double> base, const EvalGrid& t, std::int64_t n_F);

/// (1/S) sum_s p_s^{n_F}.
double expected_reliability(std::span<const double> samples, std::int64_t n_F);

/// expected_reliability at each of the strictly increasing horizons; exactly
/// nonincreasing in the horizon.
std::vector<double> expected_reliability_curve(std::span<const double> samples,
                                               std::span<const std::int64_t> horizons);

double sample_mean(std::span<const double> samples);

// --- orchestration ----------------------------------------------------------

struct EngineOptions {
  unsigned threads = 1;
  MemoryLedger* ledger = nullptr;
  bool subdomain_quadrature = true;  // subdomain CDF mixtures (dominant cost)
  bool keep_theta = false;           // retain per-config theta draws in DomainRun
  bool keep_members = false;         // retain member CDFs in the report envelopes
};

/// Everything computed for one domain across its K configurations.
struct DomainRun {
  std::vector<HyperConfig> configs;
  std::vector<double> log_evidence;                          // [k]
  std::vector<std::vector<double>> p;                        // [k][S]
  std::vector<DomainSamples> theta;                          // [k], only with keep_theta
  std::vector<std::vector<std::vector<double>>> sub_cdf;     // [j][k][T]
  std::vector<std::vector<std::vector<double>>> sub_expected;  // [j][k][H]
  std::vector<std::vector<double>> sub_mean;                 // [j][k]
  std::vector<std::vector<double>> dom_cdf;                  // [k][T]
  std::vector<std::vector<double>> dom_expected;             // [k][H]
  std::vector<double> dom_mean;                              // [k]
};

/// Seed of the sampling stream for (domain index, configuration).
std::uint64_t domain_sample_seed(std::uint64_t master, std::size_t domain_index, const HyperConfig& h) noexcept;
std::uint64_t domain_config_seed(std::uint64_t master, std::size_t domain_index) noexcept;
std::uint64_t pairing_seed(std::uint64_t master) noexcept;

/// Runs the domain stage for explicit configurations. `horizons` must be
/// sorted and unique.
DomainRun run_domain(const DomainSpec& domain, std::size_t domain_index, const std::vector<HyperConfig>& configs,
                     const HyperGrid& grid, std::size_t S, const EvalGrid& t, std::uint64_t master_seed,
                     std::span<const std::int64_t> horizons, const EngineOptions& opts);

/// Calls fn(pairing index, p_L samples) for every pairing; fn must only
/// write state owned by that index.
void for_each_pairing(std::span<const double> domain_weights,
                      const std::vector<const std::vector<std::vector<double>>*>& domain_p,
                      const std::vector<std::vector<std::size_t>>& pairings, unsigned threads,
                      MemoryLedger* ledger,
                      const std::function<void(std::size_t, std::span<const double>)>& fn);

enum class Level { subdomain, domain, system };
std::string to_string(Level level);
Level level_from_string(const std::string& s);

struct EntityReport {
  Level level = Level::system;
  std::string entity;
  CdfEnvelope cdf;
  double mean_lower = 0.0;
  double mean_upper = 0.0;
  ReliabilityCurve reliability;
  friend bool operator==(const EntityReport&, const EntityReport&) = default;
};

struct InferenceReport {
  EvalGrid t;
  std::uint64_t master_seed = 0;
  std::vector<std::vector<HyperConfig>> configs;  // per domain
  std::size_t pairing_count = 0;
  std::vector<EntityReport> entities;  // subdomains, then domains, then the system

  const EntityReport& find(Level level, const std::string& entity) const;
  const EntityReport& system() const { return entities.back(); }
  friend bool operator==(const InferenceReport&, const InferenceReport&) = default;
};

/// Full pipeline on validated settings. Deterministic given the master seed,
/// independent of opts.threads.
InferenceReport infer(const Settings& settings, const EngineOptions& opts = {});

}  // namespace credrel
