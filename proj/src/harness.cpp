#include "credrel/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "credrel/baselines.hpp"
#include "credrel/error.hpp"
#include "credrel/rng.hpp"

namespace credrel {
namespace {

enum HarnessStream : std::uint64_t { kCountStream = 20, kOpStream = 21, kBaselineStream = 22, kEngineStream = 23 };

const std::vector<SubdomainData> kBenchCounts{
    {"MBPP", 113, 257}, {"DS-1000", 490, 1000}, {"BoolQ", 3086, 3468}, {"RACE-H", 3044, 3712}};

std::vector<double> normalized(std::vector<double> v) {
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= sum;
  return v;
}

}  // namespace

double GroundTruth::system_reliability() const {
  return std::inner_product(op_gt.begin(), op_gt.end(), theta_gt.begin(), 0.0);
}

void GroundTruth::check() const {
  std::vector<ValidationIssue> issues;
  const std::size_t n = theta_gt.size();
  if (n == 0) issues.push_back({"ground_truth.theta_gt", "at least one subdomain is required"});
  if (op_gt.size() != n) issues.push_back({"ground_truth.op_gt", "one weight per subdomain is required"});
  if (sample_sizes.size() != n) issues.push_back({"ground_truth.sample_sizes", "one sample size per subdomain is required"});
  for (std::size_t k = 0; k < theta_gt.size(); ++k)
    if (!(theta_gt[k] >= 0.0 && theta_gt[k] <= 1.0))
      issues.push_back({fmt::format("ground_truth.theta_gt[{}]", k), "must lie in [0,1]"});
  for (std::size_t k = 0; k < op_gt.size(); ++k)
    if (!(op_gt[k] >= 0.0)) issues.push_back({fmt::format("ground_truth.op_gt[{}]", k), "must be >= 0"});
  if (std::fabs(std::accumulate(op_gt.begin(), op_gt.end(), 0.0) - 1.0) > 1e-9)
    issues.push_back({"ground_truth.op_gt", "must sum to 1"});
  for (std::size_t k = 0; k < sample_sizes.size(); ++k)
    if (sample_sizes[k] < 0) issues.push_back({fmt::format("ground_truth.sample_sizes[{}]", k), "must be >= 0"});
  if (std::accumulate(domain_sizes.begin(), domain_sizes.end(), std::size_t{0}) != n ||
      std::any_of(domain_sizes.begin(), domain_sizes.end(), [](std::size_t s) { return s == 0; }))
    issues.push_back({"ground_truth.domain_sizes", "must be positive and add up to the subdomain count"});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

GroundTruth GroundTruth::reference() {
  return {{0.75, 0.65, 0.58, 0.45}, {0.30, 0.10, 0.20, 0.40}, kSmallN, {2, 2}};
}

std::vector<SubdomainData> generate_counts(const GroundTruth& gt, std::uint64_t seed) {
  gt.check();
  std::vector<SubdomainData> out;
  for (std::size_t k = 0; k < gt.theta_gt.size(); ++k) {
    Rng rng(derive_substream(seed, {k}));
    const std::int64_t c = sample_binomial(rng, gt.sample_sizes[k], gt.theta_gt[k]);
    out.push_back({fmt::format("sub{}", k + 1), c, gt.sample_sizes[k]});
  }
  return out;
}

OpScenarios op_scenarios(const GroundTruth& gt, double noise, std::uint64_t seed) {
  gt.check();
  if (!(noise >= 0.0 && noise < 1.0)) throw DomainError("noise must lie in [0, 1)");
  OpScenarios out;
  const double total = static_cast<double>(std::accumulate(gt.sample_sizes.begin(), gt.sample_sizes.end(), std::int64_t{0}));
  if (!(total > 0.0)) throw DomainError("dataset-proportional profile needs a positive total sample size");
  for (const auto n : gt.sample_sizes) out.data.push_back(static_cast<double>(n) / total);

  Rng rng(seed);
  if (noise == 0.0) {
    out.approx = gt.op_gt;
  } else {
    for (const double w : gt.op_gt) out.approx.push_back(w * (1.0 + noise * (2.0 * rng.uniform() - 1.0)));
    out.approx = normalized(std::move(out.approx));
  }
  out.gt = gt.op_gt;
  return out;
}

SystemSpec system_from_flat(const std::vector<SubdomainData>& counts, std::span<const double> op,
                            std::span<const std::size_t> domain_sizes, const HyperBox& box) {
  if (op.size() != counts.size()) throw DomainError("profile length does not match subdomain count");
  SystemSpec sys;
  std::size_t q = 0;
  for (std::size_t i = 0; i < domain_sizes.size(); ++i) {
    DomainSpec d;
    d.label = fmt::format("D{}", i + 1);
    d.box = box;
    double w = 0.0;
    for (std::size_t j = 0; j < domain_sizes[i]; ++j, ++q) {
      d.subdomains.push_back(counts.at(q));
      d.op_weights.push_back(op[q]);
      w += op[q];
    }
    if (w > 0.0)
      for (auto& o : d.op_weights) o /= w;
    else
      d.op_weights.assign(domain_sizes[i], 1.0 / static_cast<double>(domain_sizes[i]));
    sys.domain_weights.push_back(w);
    sys.domains.push_back(std::move(d));
  }
  if (q != counts.size()) throw DomainError("domain sizes do not cover every subdomain");
  return sys;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must lie in [0,1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

PosteriorQuantiles posterior_quantiles(std::span<const double> samples) {
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  return {quantile_sorted(s, 0.5), quantile_sorted(s, 0.05), quantile_sorted(s, 0.95)};
}

MethodSummary summarize_quantiles(const std::string& method, std::span<const PosteriorQuantiles> per_config,
                                  double p_gt) {
  if (per_config.empty()) throw DomainError("summary needs at least one configuration");
  MethodSummary out;
  out.method = method;
  const auto& f = per_config.front();
  out.median = {f.median, f.median};
  out.error = {std::fabs(f.median - p_gt), std::fabs(f.median - p_gt)};
  out.interval_90 = {f.q05, f.q95};
  for (const auto& q : per_config) {
    const double e = std::fabs(q.median - p_gt);
    out.median = {std::min(out.median.lo, q.median), std::max(out.median.hi, q.median)};
    out.error = {std::min(out.error.lo, e), std::max(out.error.hi, e)};
    out.interval_90 = {std::min(out.interval_90.lo, q.q05), std::max(out.interval_90.hi, q.q95)};
  }
  return out;
}

MethodSummary summarize_method(const std::string& method, std::span<const std::vector<double>> per_config_samples,
                               double p_gt) {
  std::vector<PosteriorQuantiles> qs;
  qs.reserve(per_config_samples.size());
  for (const auto& s : per_config_samples) qs.push_back(posterior_quantiles(s));
  return summarize_quantiles(method, qs, p_gt);
}

std::uint64_t rq5_count_seed(const Rq5Settings& settings, std::size_t regime) {
  return derive_substream(settings.data_seed.value_or(settings.mc.master_seed), {kCountStream, regime});
}

std::uint64_t rq5_profile_seed(const Rq5Settings& settings) {
  return derive_substream(settings.data_seed.value_or(settings.mc.master_seed), {kOpStream});
}

std::vector<Rq5Row> run_rq5(const GroundTruth& gt_in, const std::vector<std::vector<std::int64_t>>& regimes,
                            const Rq5Settings& settings) {
  const std::uint64_t master = settings.mc.master_seed;
  const std::size_t S = settings.mc.samples_per_config;
  const double p_gt = gt_in.system_reliability();
  const std::vector<std::string> op_names{"data", "approx", "gt"};
  std::vector<Rq5Row> rows;

  for (std::size_t r = 0; r < regimes.size(); ++r) {
    GroundTruth gt = gt_in;
    gt.sample_sizes = regimes[r];
    gt.check();
    const auto counts = generate_counts(gt, rq5_count_seed(settings, r));
    const OpScenarios ops = op_scenarios(gt, settings.noise, rq5_profile_seed(settings));
    const std::vector<const std::vector<double>*> op_list{&ops.data, &ops.approx, &ops.gt};

    // The imprecise model's domain stage depends only on the counts, so one
    // run per regime serves every OP scenario.
    const bool want_imprecise = std::find(settings.methods.begin(), settings.methods.end(), kMethodImprecise) !=
                                settings.methods.end();
    std::vector<DomainRun> runs;
    std::vector<std::vector<std::size_t>> pairings;
    if (want_imprecise) {
      const SystemSpec sys = system_from_flat(counts, ops.gt, gt.domain_sizes, settings.box);
      const HyperGrid grid = build_grid(settings.grid);
      const EvalGrid t = EvalGrid::uniform(settings.mc.t_grid_size);
      EngineOptions opts;
      opts.threads = settings.threads;
      opts.subdomain_quadrature = false;
      opts.keep_theta = true;
      const std::uint64_t engine_seed = derive_substream(master, {kEngineStream, r});
      std::vector<std::size_t> config_counts;
      for (std::size_t i = 0; i < sys.domains.size(); ++i) {
        const auto configs = generate_configs(sys.domains[i].box, settings.mc.configs_per_domain,
                                              domain_config_seed(engine_seed, i));
        runs.push_back(run_domain(sys.domains[i], i, configs, grid, S, t, engine_seed, {}, opts));
        config_counts.push_back(configs.size());
      }
      pairings = generate_pairings(config_counts, settings.mc.pairing_cap, pairing_seed(engine_seed));
    }

    for (std::size_t o = 0; o < op_list.size(); ++o) {
      const SystemSpec sys = system_from_flat(counts, *op_list[o], gt.domain_sizes, settings.box);
      for (std::size_t mth = 0; mth < settings.methods.size(); ++mth) {
        const std::string& method = settings.methods[mth];
        Rq5Row row{r, regimes[r], op_names[o], {}};
        if (method == kMethodBbUninformative || method == kMethodBbInformative) {
          std::vector<BetaPosterior> priors;
          for (std::size_t k = 0; k < counts.size(); ++k)
            priors.push_back(method == kMethodBbUninformative ? BetaPosterior{1.0, 1.0}
                                                              : informative_prior(gt.theta_gt[k], settings.kappa));
          const auto samples = bb_system_samples(sys, priors, settings.baseline_samples, derive_substream(master, {kBaselineStream, r, mth}));
          const std::vector<double> q = samples;
          row.summary = summarize_method(method, std::span(&q, 1), p_gt);
        } else if (method == kMethodImprecise) {
          std::vector<std::vector<std::vector<double>>> dom_p(runs.size());
          std::vector<const std::vector<std::vector<double>>*> dom_ptr;
          for (std::size_t i = 0; i < runs.size(); ++i) {
            for (const auto& th : runs[i].theta) dom_p[i].push_back(aggregate_domain(th, sys.domains[i].op_weights));
            dom_ptr.push_back(&dom_p[i]);
          }
          std::vector<PosteriorQuantiles> per_pairing(pairings.size());
          for_each_pairing(sys.domain_weights, dom_ptr, pairings, settings.threads, nullptr,
                           [&](std::size_t idx, std::span<const double> pl) { per_pairing[idx] = posterior_quantiles(pl); });
          row.summary = summarize_quantiles(method, per_pairing, p_gt);
        } else {
          throw ConfigError("synthetic.methods", "unknown method '" + method + "'");
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

SweepParam sweep_param_from_string(const std::string& s) {
  if (s == "m") return SweepParam::domains;
  if (s == "n" || s == "nbar") return SweepParam::subdomains;
  if (s == "K") return SweepParam::configs;
  if (s == "S") return SweepParam::samples;
  if (s == "G") return SweepParam::grid;
  throw ConfigError("param", "unknown sweep parameter '" + s + "' (expected m, n, K, S or G)");
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::domains:
      return "m";
    case SweepParam::subdomains:
      return "n";
    case SweepParam::configs:
      return "K";
    case SweepParam::samples:
      return "S";
    case SweepParam::grid:
      return "G";
  }
  return "?";
}

GridSpec grid_for_size(std::size_t G, const GridSpec& base) {
  if (G < 1) throw DomainError("grid size must be positive");
  const auto limit = static_cast<std::size_t>(std::floor(std::sqrt(0.8 * static_cast<double>(G))));
  std::size_t n_nu = 1;
  for (std::size_t d = std::max<std::size_t>(limit, 1); d >= 1; --d) {
    if (G % d == 0) {
      n_nu = d;
      break;
    }
  }
  GridSpec out = base;
  out.n_nu = n_nu;
  out.n_mu = G / n_nu;
  return out;
}

SystemSpec bench_system(std::size_t m, std::size_t n) {
  if (m < 1 || n < 1) throw DomainError("bench hierarchy needs m, n >= 1");
  SystemSpec sys;
  for (std::size_t i = 0; i < m; ++i) {
    DomainSpec d;
    d.label = fmt::format("D{}", i + 1);
    for (std::size_t j = 0; j < n; ++j) {
      SubdomainData sd = kBenchCounts[(i * n + j) % kBenchCounts.size()];
      sd.label = fmt::format("{}-{}", sd.label, j + 1);
      d.subdomains.push_back(sd);
    }
    d.op_weights.assign(n, 1.0 / static_cast<double>(n));
    sys.domains.push_back(std::move(d));
  }
  sys.domain_weights.assign(m, 1.0 / static_cast<double>(m));
  return sys;
}

Settings bench_baseline() {
  Settings s;
  s.system = bench_system(2, 2);
  return s;
}

std::vector<ScalingRecord> run_scaling_sweep(SweepParam param, const std::vector<double>& values,
                                             const Settings& base) {
  std::vector<ScalingRecord> out;
  const std::size_t base_m = base.system.domains.size();
  const std::size_t base_n = base.system.domains.empty() ? 2 : base.system.domains.front().subdomains.size();
  for (std::size_t v = 0; v < values.size(); ++v) {
    if (!(values[v] > 0.0)) throw ConfigError("values", "sweep values must be positive");
    if (v > 0 && values[v] <= values[v - 1]) throw ConfigError("values", "sweep values must be increasing");
    Settings s = base;
    const auto x = static_cast<std::size_t>(std::llround(values[v]));
    switch (param) {
      case SweepParam::domains:
        s.system = bench_system(x, base_n);
        break;
      case SweepParam::subdomains:
        s.system = bench_system(base_m, x);
        break;
      case SweepParam::configs:
        s.mc.configs_per_domain = x;
        break;
      case SweepParam::samples:
        s.mc.samples_per_config = x;
        break;
      case SweepParam::grid:
        s.grid = grid_for_size(x, base.grid);
        break;
    }
    s = validate(s);
    MemoryLedger ledger;
    EngineOptions opts;
    opts.threads = 1;
    opts.ledger = &ledger;
    const auto start = std::chrono::steady_clock::now();
    const InferenceReport report = infer(s, opts);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    (void)report;
    const double value = param == SweepParam::grid ? static_cast<double>(s.grid.size()) : values[v];
    out.push_back({to_string(param), value, elapsed.count(), ledger.peak()});
  }
  return out;
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3) throw DomainError("power-law fit needs >= 3 paired points");
  const auto n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] > 0.0) || !(ys[k] > 0.0)) throw DomainError("power-law fit needs positive data");
    sx += std::log(xs[k]);
    sy += std::log(ys[k]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double dx = std::log(xs[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ys[k]) - my);
  }
  if (sxx <= 1e-300) throw DomainError("power-law fit is degenerate: x values are constant");
  const double slope = sxy / sxx;
  return {std::exp(my - slope * mx), slope};
}

}  // namespace credrel
