#include "credrel/inference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "credrel/error.hpp"
#include "credrel/numerics.hpp"
#include "credrel/parallel.hpp"
#include "credrel/rng.hpp"

namespace credrel {
namespace {

// Substream tags: first element of every seed path.
enum StreamTag : std::uint64_t { kConfigStream = 1, kSampleStream = 2, kPairingStream = 3 };

// Cells lighter than this are dropped from subdomain mixtures; the kept mass
// is renormalized, so the error is bounded by G * kPruneWeight.
constexpr double kPruneWeight = 1e-15;
// A component CDF below this (left tail) or above 1 − this (right tail) is
// taken as 0 / 1 for every further grid point; valid because I_t is monotone.
constexpr double kTailTolerance = 1e-16;
// Above this horizon the per-node products switch to ln B differences.
constexpr std::int64_t kProductHorizonLimit = 4096;

double interval_draw(Rng& rng, const Interval& iv) {
  if (iv.hi == iv.lo) return iv.lo;
  return std::min(iv.hi, iv.lo + rng.uniform() * (iv.hi - iv.lo));
}

void require_sorted_horizons(std::span<const std::int64_t> horizons) {
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    if (horizons[h] < 1) throw DomainError("horizons must be >= 1");
    if (h > 0 && horizons[h] <= horizons[h - 1]) throw DomainError("horizons must be strictly increasing");
  }
}

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string domain_name(const DomainSpec& d, std::size_t i) {
  return d.label.empty() ? fmt::format("domain{}", i + 1) : d.label;
}

// min/max across members at each position.
void bounds_over(const std::vector<std::vector<double>>& members, std::vector<double>& lo, std::vector<double>& hi) {
  lo = members.front();
  hi = members.front();
  for (const auto& m : members)
    for (std::size_t k = 0; k < m.size(); ++k) {
      lo[k] = std::min(lo[k], m[k]);
      hi[k] = std::max(hi[k], m[k]);
    }
}

EntityReport make_entity(Level level, std::string name, const std::vector<std::vector<double>>& cdfs,
                         const std::vector<std::vector<double>>& expected, const std::vector<double>& means,
                         std::span<const std::int64_t> horizons, const EvalGrid& t, bool horizon_cdfs,
                         bool keep_members) {
  EntityReport e;
  e.level = level;
  e.entity = std::move(name);
  e.cdf = envelope(cdfs, keep_members);
  const auto [mlo, mhi] = std::minmax_element(means.begin(), means.end());
  e.mean_lower = *mlo;
  e.mean_upper = *mhi;
  e.reliability.horizons.assign(horizons.begin(), horizons.end());
  if (!horizons.empty()) bounds_over(expected, e.reliability.expected_lower, e.reliability.expected_upper);
  if (horizon_cdfs) {
    for (const auto n : horizons) {
      std::vector<std::vector<double>> transformed;
      transformed.reserve(cdfs.size());
      for (const auto& m : cdfs) transformed.push_back(reliability_cdf(m, t, n));
      e.reliability.cdfs.push_back(envelope(transformed, false));
    }
  }
  return e;
}

}  // namespace

EvalGrid EvalGrid::uniform(std::size_t size) {
  if (size < 2) throw DomainError("evaluation grid needs at least 2 points");
  EvalGrid g;
  g.t.resize(size);
  const double denom = static_cast<double>(size - 1);
  for (std::size_t k = 0; k < size; ++k) g.t[k] = static_cast<double>(k) / denom;
  g.t.back() = 1.0;
  return g;
}

std::vector<HyperConfig> generate_configs(const HyperBox& box, std::size_t K, std::uint64_t seed) {
  std::vector<HyperConfig> out;
  out.reserve(K);
  if (K >= 16) {
    for (unsigned bits = 0; bits < 16; ++bits) {
      out.push_back({(bits & 1U) ? box.a.hi : box.a.lo, (bits & 2U) ? box.b.hi : box.b.lo,
                     (bits & 4U) ? box.c.hi : box.c.lo, (bits & 8U) ? box.d.hi : box.d.lo});
    }
  }
  Rng rng(seed);
  while (out.size() < K) {
    HyperConfig h;
    h.a = interval_draw(rng, box.a);
    h.b = interval_draw(rng, box.b);
    h.c = interval_draw(rng, box.c);
    h.d = interval_draw(rng, box.d);
    out.push_back(h);
  }
  return out;
}

std::uint64_t config_key(const HyperConfig& h) noexcept {
  std::uint64_t k = mix64(std::bit_cast<std::uint64_t>(h.a));
  k = mix64(k ^ std::bit_cast<std::uint64_t>(h.b));
  k = mix64(k ^ std::bit_cast<std::uint64_t>(h.c));
  return mix64(k ^ std::bit_cast<std::uint64_t>(h.d));
}

std::vector<double> subdomain_marginal_cdf(const DomainSpec& domain, std::size_t j, const HyperGrid& weighted,
                                           const EvalGrid& t) {
  if (j >= domain.subdomains.size()) throw DomainError("subdomain index out of range");
  if (!weighted.weighted()) throw DomainError("subdomain_marginal_cdf needs a weighted grid");
  const auto c = static_cast<double>(domain.subdomains[j].correct);
  const auto f = static_cast<double>(domain.subdomains[j].total - domain.subdomains[j].correct);
  const std::size_t T = t.size();

  std::vector<double> out(T, 0.0);
  double kept = 0.0;
  for (std::size_t g = 0; g < weighted.size(); ++g) {
    const double w = weighted.weights[g];
    if (w < kPruneWeight) continue;
    kept += w;
    const double mu = weighted.mu_at(g);
    const double nu = weighted.nu_at(g);
    const BetaCdf cdf(c + mu * nu, f + (1.0 - mu) * nu);

    // Walk outward from the component mean; stop each direction once the
    // component CDF is numerically 0 (left) or 1 (right).
    const double mean = cdf.alpha() / (cdf.alpha() + cdf.beta());
    const auto start = static_cast<std::size_t>(std::lower_bound(t.t.begin(), t.t.end(), mean) - t.t.begin());
    for (std::size_t k = start; k < T; ++k) {
      const double v = cdf(t.t[k]);
      if (v >= 1.0 - kTailTolerance) {
        for (std::size_t r = k; r < T; ++r) out[r] += w;
        break;
      }
      out[k] += w * v;
    }
    for (std::size_t k = start; k-- > 0;) {
      const double v = cdf(t.t[k]);
      if (v < kTailTolerance) break;
      out[k] += w * v;
    }
  }
  if (!(kept > 0.0)) throw NumericalError("subdomain mixture has no cell above the pruning threshold");
  for (auto& v : out) v = std::clamp(v / kept, 0.0, 1.0);
  if (t.t.front() == 0.0) out.front() = 0.0;
  if (t.t.back() == 1.0) out.back() = 1.0;
  return out;
}

std::vector<double> subdomain_expected_reliability(const DomainSpec& domain, std::size_t j,
                                                   const HyperGrid& weighted,
                                                   std::span<const std::int64_t> horizons) {
  require_sorted_horizons(horizons);
  if (j >= domain.subdomains.size()) throw DomainError("subdomain index out of range");
  const auto c = static_cast<double>(domain.subdomains[j].correct);
  const auto f = static_cast<double>(domain.subdomains[j].total - domain.subdomains[j].correct);
  const std::size_t H = horizons.size();
  std::vector<double> out(H, 0.0);
  if (H == 0) return out;
  const bool use_products = horizons.back() <= kProductHorizonLimit;

  double kept = 0.0;
  for (std::size_t g = 0; g < weighted.size(); ++g) {
    const double w = weighted.weights[g];
    if (w < kPruneWeight) continue;
    kept += w;
    const double alpha = c + weighted.mu_at(g) * weighted.nu_at(g);
    const double beta = f + (1.0 - weighted.mu_at(g)) * weighted.nu_at(g);
    if (use_products) {
      double prod = 1.0;
      std::int64_t k = 0;
      for (std::size_t h = 0; h < H; ++h) {
        for (; k < horizons[h]; ++k) {
          const auto dk = static_cast<double>(k);
          prod *= (alpha + dk) / (alpha + beta + dk);
        }
        out[h] += w * prod;
      }
    } else {
      const double base = ln_beta(alpha, beta);
      double prev = 1.0;
      for (std::size_t h = 0; h < H; ++h) {
        const double v = std::min(prev, std::exp(ln_beta(alpha + static_cast<double>(horizons[h]), beta) - base));
        out[h] += w * v;
        prev = v;
      }
    }
  }
  for (auto& v : out) v = std::clamp(v / kept, 0.0, 1.0);
  return out;
}

DomainSamples sample_domain(const DomainSpec& domain, const HyperGrid& weighted, std::size_t S,
                            std::uint64_t seed) {
  if (!weighted.weighted()) throw DomainError("sample_domain needs a weighted grid");
  const std::size_t n = domain.subdomains.size();
  DomainSamples out;
  out.subdomains = n;
  out.samples = S;
  out.theta.resize(n * S);

  std::vector<double> succ(n);
  std::vector<double> fail(n);
  for (std::size_t j = 0; j < n; ++j) {
    succ[j] = static_cast<double>(domain.subdomains[j].correct);
    fail[j] = static_cast<double>(domain.subdomains[j].total - domain.subdomains[j].correct);
  }

  Rng rng(seed);
  const CategoricalTable cells(weighted.weights);
  for (std::size_t s = 0; s < S; ++s) {
    const std::size_t g = cells(rng);
    const double mu = weighted.mu_at(g);
    const double nu = weighted.nu_at(g);
    for (std::size_t j = 0; j < n; ++j) out.theta[j * S + s] = sample_beta(rng, succ[j] + mu * nu, fail[j] + (1.0 - mu) * nu);
  }
  out.p = aggregate_domain(out, domain.op_weights);
  return out;
}

std::vector<double> aggregate_domain(const DomainSamples& samples, std::span<const double> weights) {
  if (weights.size() != samples.subdomains) throw DomainError("weight count does not match subdomain count");
  const std::size_t S = samples.samples;
  std::vector<double> p(S, 0.0);
  std::vector<double> lo(S, 1.0);
  std::vector<double> hi(S, 0.0);
  for (std::size_t j = 0; j < samples.subdomains; ++j) {
    const double w = weights[j];
    const auto th = samples.theta_of(j);
    for (std::size_t s = 0; s < S; ++s) {
      p[s] += w * th[s];
      lo[s] = std::min(lo[s], th[s]);
      hi[s] = std::max(hi[s], th[s]);
    }
  }
  for (std::size_t s = 0; s < S; ++s) p[s] = std::clamp(p[s], lo[s], hi[s]);
  return p;
}

std::vector<std::vector<std::size_t>> generate_pairings(std::span<const std::size_t> config_counts,
                                                        std::size_t cap, std::uint64_t seed) {
  if (config_counts.empty()) throw DomainError("generate_pairings needs at least one domain");
  std::size_t product = 1;
  bool saturated = false;
  for (const auto c : config_counts) {
    if (c == 0) throw DomainError("every domain needs at least one configuration");
    if (product > std::numeric_limits<std::size_t>::max() / c)
      saturated = true;
    else
      product *= c;
  }
  const std::size_t m = config_counts.size();
  std::vector<std::vector<std::size_t>> out;

  if (!saturated && product <= cap) {
    out.reserve(product);
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t r = 0; r < product; ++r) {
      out.push_back(idx);
      for (std::size_t d = m; d-- > 0;) {
        if (++idx[d] < config_counts[d]) break;
        idx[d] = 0;
      }
    }
    return out;
  }

  Rng rng(seed);
  std::set<std::vector<std::size_t>> chosen;
  std::vector<std::size_t> tuple(m);
  while (chosen.size() < cap) {
    for (std::size_t d = 0; d < m; ++d)
      tuple[d] = std::min(config_counts[d] - 1,
                          static_cast<std::size_t>(rng.uniform() * static_cast<double>(config_counts[d])));
    chosen.insert(tuple);
  }
  out.assign(chosen.begin(), chosen.end());
  return out;
}

std::vector<double> sample_system(std::span<const double> domain_weights,
                                  const std::vector<std::span<const double>>& domain_p) {
  if (domain_p.empty() || domain_weights.size() != domain_p.size())
    throw DomainError("sample_system needs one weight per domain sample array");
  const std::size_t S = domain_p.front().size();
  for (const auto& p : domain_p)
    if (p.size() != S) throw DomainError("domain sample arrays have mismatched sizes");
  std::vector<double> out(S, 0.0);
  for (std::size_t s = 0; s < S; ++s) {
    double acc = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < domain_p.size(); ++i) {
      const double v = domain_p[i][s];
      acc += domain_weights[i] * v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out[s] = std::clamp(acc, lo, hi);
  }
  return out;
}

std::vector<double> empirical_cdf(std::span<const double> samples, const EvalGrid& t) {
  if (samples.empty()) throw DomainError("empirical_cdf needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(t.size());
  const auto S = static_cast<double>(sorted.size());
  auto it = sorted.begin();
  for (std::size_t k = 0; k < t.size(); ++k) {
    it = std::upper_bound(it, sorted.end(), t.t[k]);
    out[k] = static_cast<double>(it - sorted.begin()) / S;
  }
  return out;
}

CdfEnvelope envelope(std::span<const std::vector<double>> members, bool keep_members) {
  if (members.empty()) throw DomainError("envelope needs at least one member");
  CdfEnvelope e;
  e.lower = members.front();
  e.upper = members.front();
  for (const auto& m : members) {
    if (m.size() != e.lower.size()) throw DomainError("envelope members must share one grid");
    for (std::size_t k = 0; k < m.size(); ++k) {
      e.lower[k] = std::min(e.lower[k], m[k]);
      e.upper[k] = std::max(e.upper[k], m[k]);
    }
  }
  if (keep_members) e.members.assign(members.begin(), members.end());
  return e;
}

std::vector<double> reliability_cdf(std::span<const double> base, const EvalGrid& t, std::int64_t n_F) {
  if (n_F < 1) throw DomainError("reliability_cdf requires n_F >= 1");
  if (base.size() != t.size()) throw DomainError("base CDF does not match the evaluation grid");
  std::vector<double> out(base.begin(), base.end());
  if (n_F == 1) return out;
  const double inv = 1.0 / static_cast<double>(n_F);
  const std::size_t T = t.size();
  for (std::size_t k = 0; k < T; ++k) {
    const double x = std::pow(t.t[k], inv);
    if (x <= t.t.front()) {
      out[k] = base.front();
      continue;
    }
    if (x >= t.t.back()) {
      out[k] = base.back();
      continue;
    }
    const auto hi = static_cast<std::size_t>(std::upper_bound(t.t.begin(), t.t.end(), x) - t.t.begin());
    const std::size_t lo = hi - 1;
    const double frac = (x - t.t[lo]) / (t.t[hi] - t.t[lo]);
    out[k] = base[lo] + frac * (base[hi] - base[lo]);
  }
  // interpolation keeps monotonicity up to rounding; make it exact
  for (std::size_t k = 1; k < T; ++k) out[k] = std::max(out[k], out[k - 1]);
  return out;
}

double expected_reliability(std::span<const double> samples, std::int64_t n_F) {
  if (samples.empty()) throw DomainError("expected_reliability needs at least one sample");
  if (n_F < 0) throw DomainError("expected_reliability requires n_F >= 0");
  double acc = 0.0;
  for (const double p : samples) acc += std::pow(p, static_cast<double>(n_F));
  return acc / static_cast<double>(samples.size());
}

std::vector<double> expected_reliability_curve(std::span<const double> samples,
                                               std::span<const std::int64_t> horizons) {
  if (samples.empty()) throw DomainError("expected_reliability_curve needs at least one sample");
  require_sorted_horizons(horizons);
  const std::size_t H = horizons.size();
  std::vector<double> acc(H, 0.0);
  for (const double p : samples) {
    double cur = 1.0;
    std::int64_t prev = 0;
    for (std::size_t h = 0; h < H; ++h) {
      const std::int64_t step = horizons[h] - prev;
      cur *= step == 1 ? p : std::pow(p, static_cast<double>(step));
      acc[h] += cur;
      prev = horizons[h];
    }
  }
  for (auto& v : acc) v /= static_cast<double>(samples.size());
  return acc;
}

double sample_mean(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("sample_mean needs at least one sample");
  double acc = 0.0;
  for (const double v : samples) acc += v;
  return acc / static_cast<double>(samples.size());
}

std::uint64_t domain_sample_seed(std::uint64_t master, std::size_t domain_index, const HyperConfig& h) noexcept {
  return derive_substream(master, {kSampleStream, domain_index, config_key(h)});
}

std::uint64_t domain_config_seed(std::uint64_t master, std::size_t domain_index) noexcept {
  return derive_substream(master, {kConfigStream, domain_index});
}

std::uint64_t pairing_seed(std::uint64_t master) noexcept { return derive_substream(master, {kPairingStream}); }

DomainRun run_domain(const DomainSpec& domain, std::size_t domain_index, const std::vector<HyperConfig>& configs,
                     const HyperGrid& grid, std::size_t S, const EvalGrid& t, std::uint64_t master_seed,
                     std::span<const std::int64_t> horizons, const EngineOptions& opts) {
  require_sorted_horizons(horizons);
  const std::size_t K = configs.size();
  const std::size_t n = domain.subdomains.size();
  const std::size_t G = grid.size();
  const std::size_t H = horizons.size();
  static constexpr std::int64_t kFirstMoment[] = {1};

  auto loglik_hold = hold_doubles(opts.ledger, G);
  const std::vector<double> loglik = grid_log_likelihood(domain.subdomains, grid);

  DomainRun run;
  run.configs = configs;
  run.log_evidence.resize(K);
  run.p.resize(K);
  run.dom_cdf.resize(K);
  run.dom_expected.resize(K);
  run.dom_mean.resize(K);
  if (opts.keep_theta) run.theta.resize(K);
  if (opts.subdomain_quadrature) {
    run.sub_cdf.assign(n, std::vector<std::vector<double>>(K));
    run.sub_expected.assign(n, std::vector<std::vector<double>>(K));
  }
  if (opts.subdomain_quadrature) run.sub_mean.assign(n, std::vector<double>(K));

  parallel_for(K, opts.threads, [&](std::size_t k) {
    // posterior log-weights + weights + categorical table + theta draws + sort buffer
    auto transient = hold_doubles(opts.ledger, 3 * G + n * S + S);
    const HyperGrid weighted = hyper_posterior(loglik, configs[k], grid);
    run.log_evidence[k] = weighted.log_evidence;
    if (opts.subdomain_quadrature) {
      for (std::size_t j = 0; j < n; ++j) {
        run.sub_cdf[j][k] = subdomain_marginal_cdf(domain, j, weighted, t);
        run.sub_expected[j][k] = subdomain_expected_reliability(domain, j, weighted, horizons);
        run.sub_mean[j][k] = subdomain_expected_reliability(domain, j, weighted, kFirstMoment).front();
      }
    }
    DomainSamples samples = sample_domain(domain, weighted, S, domain_sample_seed(master_seed, domain_index, configs[k]));
    run.dom_cdf[k] = empirical_cdf(samples.p, t);
    run.dom_expected[k] = H ? expected_reliability_curve(samples.p, horizons) : std::vector<double>{};
    run.dom_mean[k] = sample_mean(samples.p);
    run.p[k] = std::move(samples.p);
    if (opts.keep_theta) run.theta[k] = std::move(samples);
  });
  return run;
}

void for_each_pairing(std::span<const double> domain_weights,
                      const std::vector<const std::vector<std::vector<double>>*>& domain_p,
                      const std::vector<std::vector<std::size_t>>& pairings, unsigned threads, MemoryLedger* ledger,
                      const std::function<void(std::size_t, std::span<const double>)>& fn) {
  parallel_for(pairings.size(), threads, [&](std::size_t r) {
    const auto& tuple = pairings[r];
    std::vector<std::span<const double>> parts(tuple.size());
    for (std::size_t i = 0; i < tuple.size(); ++i) parts[i] = (*domain_p[i])[tuple[i]];
    auto hold = hold_doubles(ledger, 2 * parts.front().size());  // p_L + sort buffer
    const std::vector<double> pl = sample_system(domain_weights, parts);
    fn(r, pl);
  });
}

std::string to_string(Level level) {
  switch (level) {
    case Level::subdomain:
      return "subdomain";
    case Level::domain:
      return "domain";
    case Level::system:
      return "system";
  }
  return "unknown";
}

Level level_from_string(const std::string& s) {
  if (s == "subdomain") return Level::subdomain;
  if (s == "domain") return Level::domain;
  if (s == "system") return Level::system;
  throw DomainError("unknown level '" + s + "'");
}

const EntityReport& InferenceReport::find(Level level, const std::string& entity) const {
  for (const auto& e : entities)
    if (e.level == level && e.entity == entity) return e;
  throw DomainError(fmt::format("no {} entity named '{}'", to_string(level), entity));
}


InferenceReport infer(const Settings& settings, const EngineOptions& opts) {
  const auto& sys = settings.system;
  const auto& mc = settings.mc;
  const std::size_t m = sys.domains.size();
  const std::vector<std::int64_t> horizons = sorted_unique(settings.query.horizons);
  const std::size_t H = horizons.size();
  const bool hcdf = settings.query.horizon_cdfs;

  InferenceReport report;
  report.t = EvalGrid::uniform(mc.t_grid_size);
  report.master_seed = mc.master_seed;
  const std::size_t T = report.t.size();
  const std::size_t S = mc.samples_per_config;

  const HyperGrid grid = build_grid(settings.grid);
  auto grid_hold = hold_doubles(opts.ledger, 2 * (grid.mu.size() + grid.nu.size()));

  std::vector<DomainRun> runs;
  std::vector<MemoryLedger::Hold> persistent;
  runs.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& dom = sys.domains[i];
    const std::size_t n = dom.subdomains.size();
    const std::size_t K = mc.configs_per_domain;
    persistent.push_back(hold_doubles(opts.ledger, K * (S + (T + H + 1) * (1 + (opts.subdomain_quadrature ? n : 0)) +
                                                        (opts.keep_theta ? n * S : 0))));
    auto configs = generate_configs(dom.box, K, domain_config_seed(mc.master_seed, i));
    runs.push_back(run_domain(dom, i, configs, grid, S, report.t, mc.master_seed, horizons, opts));
    report.configs.push_back(std::move(configs));
  }

  std::vector<std::size_t> counts(m);
  std::vector<const std::vector<std::vector<double>>*> dom_p(m);
  for (std::size_t i = 0; i < m; ++i) {
    counts[i] = runs[i].configs.size();
    dom_p[i] = &runs[i].p;
  }
  const auto pairings = generate_pairings(counts, mc.pairing_cap, pairing_seed(mc.master_seed));
  report.pairing_count = pairings.size();
  const std::size_t P = pairings.size();
  persistent.push_back(hold_doubles(opts.ledger, P * (T + H + 1)));

  std::vector<std::vector<double>> sys_cdf(P);
  std::vector<std::vector<double>> sys_expected(P);
  std::vector<double> sys_mean(P);
  for_each_pairing(sys.domain_weights, dom_p, pairings, opts.threads, opts.ledger,
                   [&](std::size_t r, std::span<const double> pl) {
                     sys_cdf[r] = empirical_cdf(pl, report.t);
                     sys_expected[r] = H ? expected_reliability_curve(pl, horizons) : std::vector<double>{};
                     sys_mean[r] = sample_mean(pl);
                   });

  if (opts.subdomain_quadrature) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto& dom = sys.domains[i];
      for (std::size_t j = 0; j < dom.subdomains.size(); ++j) {
        report.entities.push_back(make_entity(Level::subdomain,
                                              domain_name(dom, i) + "/" +
                                                  (dom.subdomains[j].label.empty()
                                                       ? fmt::format("sub{}", j + 1)
                                                       : dom.subdomains[j].label),
                                              runs[i].sub_cdf[j], runs[i].sub_expected[j], runs[i].sub_mean[j], horizons,
                                              report.t, hcdf, opts.keep_members));
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    report.entities.push_back(make_entity(Level::domain, domain_name(sys.domains[i], i), runs[i].dom_cdf,
                                          runs[i].dom_expected, runs[i].dom_mean, horizons, report.t, hcdf,
                                          opts.keep_members));
  }
  report.entities.push_back(make_entity(Level::system, "system", sys_cdf, sys_expected, sys_mean, horizons, report.t,
                                        hcdf, opts.keep_members));
  return report;
}

}  // namespace credrel
