// credrel: imprecise hierarchical reliability assessment from pass/fail counts.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "credrel/baselines.hpp"
#include "credrel/config.hpp"
#include "credrel/error.hpp"
#include "credrel/harness.hpp"
#include "credrel/inference.hpp"
#include "credrel/report_io.hpp"

namespace fs = std::filesystem;
using namespace credrel;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool svg = false;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "JSON run configuration");
  if (config_required) opt->required();
  cmd->add_option("--seed", c.seed, "master seed (overrides mc.seed)");
  cmd->add_option("--out", c.out, "output directory (overrides output.dir)");
  cmd->add_option("--threads", c.threads, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
}

RunConfig load(const Common& c) {
  RunConfig cfg;
  if (!c.config.empty()) cfg = parse_config(c.config);
  if (c.seed) cfg.settings.mc.master_seed = *c.seed;
  if (!c.out.empty()) cfg.output.dir = c.out;
  if (c.svg) cfg.output.svg = true;
  return cfg;
}

void require_hierarchy(const RunConfig& cfg) {
  if (!cfg.has_hierarchy) throw ConfigError("hierarchy", "required by this command");
}

CsvHeader header_for(const RunConfig& cfg, const Common& c) {
  return {cfg.settings.mc.master_seed, c.config, config_fingerprint(to_json(cfg))};
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

void emit_report(const fs::path& dir, const InferenceReport& report, const RunConfig& cfg, const Common& c) {
  const CsvHeader h = header_for(cfg, c);
  if (cfg.output.csv) {
    write_file(dir / "envelopes.csv", render([&](std::ostream& o) { write_envelopes_csv(o, report, h); }));
    write_file(dir / "reliability.csv", render([&](std::ostream& o) { write_reliability_csv(o, report, h); }));
    if (cfg.settings.query.horizon_cdfs) {
      const auto& horizons = report.system().reliability.horizons;
      for (std::size_t k = 0; k < horizons.size(); ++k)
        write_file(dir / fmt::format("reliability_cdf_n{}.csv", horizons[k]),
                   render([&](std::ostream& o) { write_horizon_envelopes_csv(o, report, k, h); }));
    }
  }
  if (cfg.output.json) write_file(dir / "report.json", report_document(report, to_json(cfg)).dump(1) + "\n");
  if (cfg.output.svg) write_file(dir / "envelopes.svg", render_svg(report));
}

void print_summary(const InferenceReport& report) {
  for (const auto& e : report.entities) {
    std::cout << fmt::format("{:<9} {:<28} mean [{:.4f}, {:.4f}]", to_string(e.level), e.entity, e.mean_lower,
                             e.mean_upper);
    const auto& r = e.reliability;
    if (!r.horizons.empty())
      std::cout << fmt::format("  E[R({})] [{:.4f}, {:.4f}]", r.horizons.front(), r.expected_lower.front(),
                               r.expected_upper.front());
    std::cout << '\n';
  }
}

EngineOptions engine(const Common& c) {
  EngineOptions o;
  o.threads = c.threads;
  return o;
}

int cmd_infer(const Common& c) {
  const RunConfig cfg = load(c);
  require_hierarchy(cfg);
  const InferenceReport report = infer(cfg.settings, engine(c));
  emit_report(cfg.output.dir, report, cfg, c);
  print_summary(report);
  return kOk;
}

int cmd_reliability(const Common& c, std::int64_t max_horizon, const std::vector<std::int64_t>& horizons) {
  RunConfig cfg = load(c);
  require_hierarchy(cfg);
  if (!horizons.empty()) {
    cfg.settings.query.horizons = horizons;
  } else {
    cfg.settings.query.horizons.clear();
    for (std::int64_t n = 1; n <= max_horizon; ++n) cfg.settings.query.horizons.push_back(n);
  }
  cfg.settings = validate(cfg.settings);
  const InferenceReport report = infer(cfg.settings, engine(c));
  emit_report(cfg.output.dir, report, cfg, c);
  const auto& sys = report.system().reliability;
  for (std::size_t k = 0; k < sys.horizons.size(); ++k)
    std::cout << fmt::format("n_F={:<6} E[R_L] in [{:.6f}, {:.6f}]\n", sys.horizons[k], sys.expected_lower[k],
                             sys.expected_upper[k]);
  return kOk;
}

std::string sweep_summary_header(const std::string& what) {
  return fmt::format("# {}\nindex,label,entity,mean_lower,mean_upper,expected1_lower,expected1_upper\n", what);
}

std::string sweep_summary_row(std::size_t index, const std::string& label, const InferenceReport& report) {
  std::string rows;
  for (const auto& e : report.entities) {
    const auto& r = e.reliability;
    const double lo = r.horizons.empty() ? 0.0 : r.expected_lower.front();
    const double hi = r.horizons.empty() ? 0.0 : r.expected_upper.front();
    rows += fmt::format("{},\"{}\",{},{},{},{},{}\n", index, label, e.entity, format_number(e.mean_lower),
                        format_number(e.mean_upper), format_number(lo), format_number(hi));
  }
  return rows;
}

std::string box_label(const HyperBox& b) {
  return fmt::format("a=[{:g},{:g}] b=[{:g},{:g}] c=[{:g},{:g}] d=[{:g},{:g}]", b.a.lo, b.a.hi, b.b.lo, b.b.hi,
                     b.c.lo, b.c.hi, b.d.lo, b.d.hi);
}

std::string vector_label(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + format_number(v[k]);
  return s;
}

int cmd_sweep_hyper(const Common& c) {
  const RunConfig cfg = load(c);
  require_hierarchy(cfg);
  if (cfg.hyper_sweep.empty()) throw ConfigError("hyper_sweep", "required by sweep-hyper");
  const fs::path dir = cfg.output.dir;
  std::string summary = sweep_summary_header(fmt::format("hyperparameter box sweep; seed {}", cfg.settings.mc.master_seed));
  for (std::size_t k = 0; k < cfg.hyper_sweep.size(); ++k) {
    RunConfig run = cfg;
    run.settings = apply_hyper_box(cfg.settings, cfg.hyper_sweep[k]);
    const InferenceReport report = infer(run.settings, engine(c));
    emit_report(dir / fmt::format("box_{}", k), report, run, c);
    summary += sweep_summary_row(k, box_label(cfg.hyper_sweep[k]), report);
    std::cout << fmt::format("box {} {}: system mean [{:.4f}, {:.4f}]\n", k, box_label(cfg.hyper_sweep[k]),
                             report.system().mean_lower, report.system().mean_upper);
  }
  write_file(dir / "summary.csv", summary);
  return kOk;
}

int cmd_sweep_op(const Common& c) {
  const RunConfig cfg = load(c);
  require_hierarchy(cfg);
  if (!cfg.op_sweep) throw ConfigError("op_sweep", "required by sweep-op");
  const fs::path dir = cfg.output.dir;
  std::string summary = sweep_summary_header(fmt::format("operational profile sweep; seed {}", cfg.settings.mc.master_seed));
  for (std::size_t k = 0; k < cfg.op_sweep->vectors.size(); ++k) {
    RunConfig run = cfg;
    run.settings = apply_op_sweep(cfg.settings, *cfg.op_sweep, k);
    const InferenceReport report = infer(run.settings, engine(c));
    emit_report(dir / fmt::format("op_{}", k), report, run, c);
    const std::string label = vector_label(cfg.op_sweep->vectors[k]);
    summary += sweep_summary_row(k, label, report);
    std::cout << fmt::format("profile {} ({}): system mean [{:.4f}, {:.4f}]\n", k, label,
                             report.system().mean_lower, report.system().mean_upper);
  }
  write_file(dir / "summary.csv", summary);
  return kOk;
}

int cmd_synth(const Common& c) {
  const RunConfig cfg = load(c);
  Rq5Settings rs = rq5_settings(cfg);
  rs.threads = c.threads;
  const auto& gt = cfg.synthetic.ground_truth;
  const auto rows = run_rq5(gt, cfg.synthetic.regimes, rs);
  const double p_gt = gt.system_reliability();
  const fs::path dir = cfg.output.dir;
  write_file(dir / "rq5.csv", render([&](std::ostream& o) { write_rq5_csv(o, rows, p_gt, header_for(cfg, c)); }));
  nlohmann::json doc = to_json(rows, p_gt);
  doc["seed"] = cfg.settings.mc.master_seed;
  doc["config"] = to_json(cfg);
  write_file(dir / "rq5.json", doc.dump(1) + "\n");
  std::cout << fmt::format("p_L_gt = {:.4f}\n", p_gt);
  for (const auto& r : rows) {
    const auto& m = r.summary;
    std::cout << fmt::format("regime {} op={:<6} {:<15} median [{:.4f}, {:.4f}] error [{:.4f}, {:.4f}] "
                             "90% [{:.4f}, {:.4f}]\n",
                             r.regime, r.op, m.method, m.median.lo, m.median.hi, m.error.lo, m.error.hi,
                             m.interval_90.lo, m.interval_90.hi);
  }
  return kOk;
}

int cmd_bench(const Common& c, const std::string& param, const std::vector<double>& values) {
  const RunConfig cfg = load(c);
  Settings base = bench_baseline();
  if (cfg.has_hierarchy) base.system = cfg.settings.system;
  if (!c.config.empty()) {
    base.grid = cfg.settings.grid;
    base.mc = cfg.settings.mc;
    base.query = cfg.settings.query;
  }
  base.mc.master_seed = cfg.settings.mc.master_seed;
  const SweepParam p = sweep_param_from_string(param);
  const auto records = run_scaling_sweep(p, values, base);
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    xs.push_back(r.value);
    ys.push_back(r.seconds);
  }
  const PowerLawFit fit = fit_power_law(xs, ys);
  const fs::path dir = cfg.output.dir;
  write_file(dir / fmt::format("scaling_{}.csv", to_string(p)),
             render([&](std::ostream& o) { write_scaling_csv(o, records, fit, header_for(cfg, c)); }));
  write_file(dir / fmt::format("scaling_{}.json", to_string(p)), to_json(records, fit).dump(1) + "\n");
  for (const auto& r : records)
    std::cout << fmt::format("{}={:<8g} {:8.3f} s  peak {:.1f} MiB\n", r.parameter, r.value, r.seconds,
                             static_cast<double>(r.peak_bytes) / (1024.0 * 1024.0));
  std::cout << fmt::format("fit: time = {:.4g} * {}^{:.3f}\n", fit.scale, to_string(p), fit.exponent);
  return kOk;
}

struct BaselineArgs {
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
  std::optional<std::int64_t> correct;
  std::optional<std::int64_t> total;
  std::vector<std::int64_t> horizons{1, 10, 100};
};

int cmd_baseline(const Common& c, const BaselineArgs& a) {
  const BetaPosterior prior{a.prior_alpha, a.prior_beta};
  std::vector<BaselineResult> results;
  if (a.correct || a.total) {
    if (!a.correct || !a.total) throw ConfigError("baseline", "--correct and --total go together");
    results.push_back(run_baseline("", *a.correct, *a.total, prior, a.horizons));
  } else {
    const RunConfig cfg = load(c);
    require_hierarchy(cfg);
    for (const auto& d : cfg.settings.system.domains)
      for (const auto& s : d.subdomains)
        results.push_back(run_baseline(d.label + "/" + s.label, s.correct, s.total, prior, a.horizons));
  }
  for (std::size_t k = 0; k < results.size(); ++k) std::cout << (k ? "\n" : "") << format_baseline(results[k]);
  if (!c.out.empty()) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : results)
      list.push_back({{"entity", r.entity},
                      {"prior", {r.prior.alpha, r.prior.beta}},
                      {"correct", r.correct},
                      {"total", r.total},
                      {"posterior", {r.posterior.alpha, r.posterior.beta}},
                      {"mean", r.posterior.mean()},
                      {"horizons", r.horizons},
                      {"expected", r.expected}});
    write_file(fs::path(c.out) / "baseline.json", nlohmann::json{{"results", list}}.dump(1) + "\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Imprecise hierarchical reliability assessment from per-subdomain pass/fail counts"};
  app.require_subcommand(1);

  Common infer_opts, rel_opts, hyper_opts, op_opts, synth_opts, bench_opts, base_opts;

  auto* infer_cmd = app.add_subcommand("infer", "posterior CDF envelopes at every level");
  add_common(infer_cmd, infer_opts, true);
  infer_cmd->add_flag("--svg", infer_opts.svg, "also write envelopes.svg");

  std::int64_t max_horizon = 100;
  std::vector<std::int64_t> rel_horizons;
  auto* rel_cmd = app.add_subcommand("reliability", "E[R(n_F)] envelopes over a horizon sweep");
  add_common(rel_cmd, rel_opts, true);
  rel_cmd->add_flag("--svg", rel_opts.svg, "also write envelopes.svg");
  rel_cmd->add_option("--max-horizon", max_horizon, "sweep n_F = 1..N")->check(CLI::PositiveNumber);
  rel_cmd->add_option("--horizons", rel_horizons, "explicit horizons (comma separated)")->delimiter(',');

  auto* hyper_cmd = app.add_subcommand("sweep-hyper", "repeat infer over the configured hyperparameter boxes");
  add_common(hyper_cmd, hyper_opts, true);
  hyper_cmd->add_flag("--svg", hyper_opts.svg, "also write envelopes.svg per run");

  auto* op_cmd = app.add_subcommand("sweep-op", "repeat infer over the configured operational profiles");
  add_common(op_cmd, op_opts, true);
  op_cmd->add_flag("--svg", op_opts.svg, "also write envelopes.svg per run");

  auto* synth_cmd = app.add_subcommand("synth", "synthetic ground-truth comparison against Beta-Binomial baselines");
  add_common(synth_cmd, synth_opts, false);

  std::string param;
  std::vector<double> values;
  auto* bench_cmd = app.add_subcommand("bench", "wall-clock scaling sweep with power-law fit");
  add_common(bench_cmd, bench_opts, false);
  bench_cmd->add_option("--param", param, "m, n, K, S or G")->required();
  bench_cmd->add_option("--values", values, "increasing values (comma separated)")->required()->delimiter(',');

  BaselineArgs base_args;
  auto* base_cmd = app.add_subcommand("baseline", "conjugate Beta-Binomial point estimates");
  add_common(base_cmd, base_opts, false);
  base_cmd->add_option("--prior-alpha", base_args.prior_alpha, "prior alpha");
  base_cmd->add_option("--prior-beta", base_args.prior_beta, "prior beta");
  base_cmd->add_option("--correct", base_args.correct, "successes C");
  base_cmd->add_option("--total", base_args.total, "trials N");
  base_cmd->add_option("--horizons", base_args.horizons, "n_F values (comma separated)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*infer_cmd) return cmd_infer(infer_opts);
    if (*rel_cmd) return cmd_reliability(rel_opts, max_horizon, rel_horizons);
    if (*hyper_cmd) return cmd_sweep_hyper(hyper_opts);
    if (*op_cmd) return cmd_sweep_op(op_opts);
    if (*synth_cmd) return cmd_synth(synth_opts);
    if (*bench_cmd) return cmd_bench(bench_opts, param, values);
    if (*base_cmd) return cmd_baseline(base_opts, base_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const DomainError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
