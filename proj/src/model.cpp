#include "credrel/model.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace credrel {
namespace {

void check_interval(const Interval& iv, const std::string& path, std::vector<ValidationIssue>& out) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo > 0.0))
    out.push_back({path, "interval bounds must be finite and > 0"});
  else if (iv.lo > iv.hi)
    out.push_back({path, fmt::format("interval min {} exceeds max {}", iv.lo, iv.hi)});
}

void check_weights(const std::vector<double>& w, std::size_t expected, const std::string& path,
                   std::vector<ValidationIssue>& out) {
  if (w.size() != expected) {
    out.push_back({path, fmt::format("expected {} weights, got {}", expected, w.size())});
    return;
  }
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!std::isfinite(w[k]) || w[k] < 0.0) out.push_back({fmt::format("{}[{}]", path, k), "weight must be >= 0"});
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::fabs(sum - 1.0) > kWeightRenormTolerance)
    out.push_back({path, fmt::format("weights sum to {:.9g}, expected 1", sum)});
}

void renormalize(std::vector<double>& w) {
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::fabs(sum - 1.0) > 1e-12)
    for (auto& v : w) v /= sum;
}

}  // namespace

std::vector<ValidationIssue> collect_issues(const SystemSpec& system, const GridSpec& grid, const McSpec& mc,
                                            const ReliabilityQuery& query) {
  std::vector<ValidationIssue> out;
  if (system.domains.empty()) out.push_back({"system.domains", "at least one domain is required"});
  check_weights(system.domain_weights, system.domains.size(), "system.weights", out);

  for (std::size_t i = 0; i < system.domains.size(); ++i) {
    const auto& dom = system.domains[i];
    const std::string dp = fmt::format("system.domains[{}]", i);
    if (dom.subdomains.empty()) out.push_back({dp + ".subdomains", "at least one subdomain is required"});
    for (std::size_t j = 0; j < dom.subdomains.size(); ++j) {
      const auto& sd = dom.subdomains[j];
      const std::string sp = fmt::format("{}.subdomains[{}]", dp, j);
      if (sd.total < 0) out.push_back({sp + ".total", "count must be >= 0"});
      if (sd.correct < 0 || sd.correct > sd.total)
        out.push_back({sp + ".correct", fmt::format("need 0 <= correct <= total, got {} of {}", sd.correct, sd.total)});
    }
    check_weights(dom.op_weights, dom.subdomains.size(), dp + ".omega", out);
    check_interval(dom.box.a, dp + ".box.a", out);
    check_interval(dom.box.b, dp + ".box.b", out);
    check_interval(dom.box.c, dp + ".box.c", out);
    check_interval(dom.box.d, dp + ".box.d", out);
  }

  if (grid.n_mu < 1 || grid.n_nu < 1) out.push_back({"grid", "n_mu and n_nu must be >= 1"});
  else if (grid.size() < 4 && grid.size() != 1)
    out.push_back({"grid", fmt::format("grid size n_mu*n_nu = {} must be >= 4 (or exactly 1)", grid.size())});
  if (!(grid.nu_min > 0.0) || !std::isfinite(grid.nu_min)) out.push_back({"grid.nu_min", "must be > 0"});
  if (!(grid.nu_max > grid.nu_min) || !std::isfinite(grid.nu_max))
    out.push_back({"grid.nu_max", "must be finite and exceed nu_min"});

  if (mc.samples_per_config < 1) out.push_back({"mc.samples_per_config", "must be >= 1"});
  if (mc.configs_per_domain < 1) out.push_back({"mc.configs_per_domain", "must be >= 1"});
  if (mc.pairing_cap < 1) out.push_back({"mc.pairing_cap", "must be >= 1"});
  if (mc.t_grid_size < 2) out.push_back({"mc.t_grid_size", "must be >= 2"});

  for (std::size_t k = 0; k < query.horizons.size(); ++k)
    if (query.horizons[k] < 1) out.push_back({fmt::format("query.horizons[{}]", k), "horizon must be >= 1"});
  return out;
}

Settings validate(const SystemSpec& system, const GridSpec& grid, const McSpec& mc, const ReliabilityQuery& query) {
  auto issues = collect_issues(system, grid, mc, query);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  Settings s{system, grid, mc, query};
  renormalize(s.system.domain_weights);
  for (auto& d : s.system.domains) renormalize(d.op_weights);
  return s;
}

Settings validate(const Settings& settings) {
  return validate(settings.system, settings.grid, settings.mc, settings.query);
}

std::size_t subdomain_count(const SystemSpec& system) noexcept {
  std::size_t n = 0;
  for (const auto& d : system.domains) n += d.subdomains.size();
  return n;
}

}  // namespace credrel
