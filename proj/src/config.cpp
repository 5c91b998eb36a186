#include "credrel/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "credrel/error.hpp"

namespace credrel {
namespace {

using nlohmann::json;

std::string rename_path(std::string path) {
  for (const auto& [from, to] : {std::pair<std::string, std::string>{"system.", "hierarchy."},
                                 {"ground_truth.", "synthetic."}}) {
    if (path.rfind(from, 0) == 0) return to + path.substr(from.size());
  }
  return path;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Collects issues instead of throwing so one pass reports everything.
class Reader {
 public:
  std::vector<ValidationIssue> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back({path, msg}); }

  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      fail(path, "must be an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        fail(join(path, key), "unknown key");
    }
    return true;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
  static std::string index(const std::string& path, std::size_t k) { return fmt::format("{}[{}]", path, k); }

  bool number(const json& j, const std::string& path, double& out) {
    if (!j.is_number()) {
      fail(path, "must be a number");
      return false;
    }
    out = j.get<double>();
    return true;
  }

  bool integer(const json& j, const std::string& path, std::int64_t& out) {
    if (!j.is_number_integer()) {
      fail(path, "must be an integer");
      return false;
    }
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      fail(path, "out of range");
      return false;
    }
    out = j.get<std::int64_t>();
    return true;
  }

  bool count(const json& j, const std::string& path, std::size_t& out) {
    std::int64_t v = 0;
    if (!integer(j, path, v)) return false;
    if (v < 0) {
      fail(path, "must be >= 0");
      return false;
    }
    out = static_cast<std::size_t>(v);
    return true;
  }

  bool seed(const json& j, const std::string& path, std::uint64_t& out) {
    if (!j.is_number_unsigned()) {
      fail(path, "must be a non-negative integer");
      return false;
    }
    out = j.get<std::uint64_t>();
    return true;
  }

  bool boolean(const json& j, const std::string& path, bool& out) {
    if (!j.is_boolean()) {
      fail(path, "must be true or false");
      return false;
    }
    out = j.get<bool>();
    return true;
  }

  bool string(const json& j, const std::string& path, std::string& out) {
    if (!j.is_string()) {
      fail(path, "must be a string");
      return false;
    }
    out = j.get<std::string>();
    return true;
  }

  bool numbers(const json& j, const std::string& path, std::vector<double>& out) {
    if (!j.is_array()) {
      fail(path, "must be an array of numbers");
      return false;
    }
    out.assign(j.size(), 0.0);
    bool ok = true;
    for (std::size_t k = 0; k < j.size(); ++k) ok = number(j[k], index(path, k), out[k]) && ok;
    return ok;
  }

  bool integers(const json& j, const std::string& path, std::vector<std::int64_t>& out) {
    if (!j.is_array()) {
      fail(path, "must be an array of integers");
      return false;
    }
    out.assign(j.size(), 0);
    bool ok = true;
    for (std::size_t k = 0; k < j.size(); ++k) ok = integer(j[k], index(path, k), out[k]) && ok;
    return ok;
  }

  bool interval(const json& j, const std::string& path, Interval& out) {
    std::vector<double> v;
    if (!numbers(j, path, v)) return false;
    if (v.size() != 2) {
      fail(path, "must be [lo, hi]");
      return false;
    }
    out = {v[0], v[1]};
    return true;
  }

  void box(const json& j, const std::string& path, HyperBox& out) {
    if (!object(j, path, {"a", "b", "c", "d"})) return;
    if (j.contains("a")) interval(j["a"], join(path, "a"), out.a);
    if (j.contains("b")) interval(j["b"], join(path, "b"), out.b);
    if (j.contains("c")) interval(j["c"], join(path, "c"), out.c);
    if (j.contains("d")) interval(j["d"], join(path, "d"), out.d);
  }
};

void check_box(Reader& r, const HyperBox& box, const std::string& path) {
  for (const auto& [name, iv] : {std::pair<const char*, const Interval*>{"a", &box.a}, {"b", &box.b},
                                 {"c", &box.c}, {"d", &box.d}}) {
    if (!(iv->lo > 0.0) || !(iv->lo <= iv->hi) || !std::isfinite(iv->hi))
      r.fail(Reader::join(path, name), "must satisfy 0 < lo <= hi < inf");
  }
}

void read_hierarchy(Reader& r, const json& j, SystemSpec& sys) {
  const std::string path = "hierarchy";
  if (!r.object(j, path, {"domains", "weights"})) return;
  if (!j.contains("domains") || !j["domains"].is_array() || j["domains"].empty()) {
    r.fail(Reader::join(path, "domains"), "must be a non-empty array");
    return;
  }
  const json& domains = j["domains"];
  for (std::size_t i = 0; i < domains.size(); ++i) {
    const std::string dpath = Reader::index("hierarchy.domains", i);
    DomainSpec d;
    d.label = fmt::format("D{}", i + 1);
    const json& dj = domains[i];
    if (!r.object(dj, dpath, {"label", "omega", "box", "subdomains"})) continue;
    if (dj.contains("label")) r.string(dj["label"], dpath + ".label", d.label);
    if (dj.contains("box")) r.box(dj["box"], dpath + ".box", d.box);
    if (!dj.contains("subdomains") || !dj["subdomains"].is_array() || dj["subdomains"].empty()) {
      r.fail(dpath + ".subdomains", "must be a non-empty array");
      continue;
    }
    const json& subs = dj["subdomains"];
    for (std::size_t k = 0; k < subs.size(); ++k) {
      const std::string spath = Reader::index(dpath + ".subdomains", k);
      SubdomainData s;
      s.label = fmt::format("S{}", k + 1);
      if (!r.object(subs[k], spath, {"label", "correct", "total"})) continue;
      if (subs[k].contains("label")) r.string(subs[k]["label"], spath + ".label", s.label);
      for (const char* key : {"correct", "total"}) {
        if (!subs[k].contains(key)) r.fail(Reader::join(spath, key), "required");
      }
      if (subs[k].contains("correct")) r.integer(subs[k]["correct"], spath + ".correct", s.correct);
      if (subs[k].contains("total")) r.integer(subs[k]["total"], spath + ".total", s.total);
      d.subdomains.push_back(std::move(s));
    }
    if (dj.contains("omega"))
      r.numbers(dj["omega"], dpath + ".omega", d.op_weights);
    else if (d.subdomains.size() == 1)
      d.op_weights = {1.0};
    else
      r.fail(dpath + ".omega", "required when a domain has more than one subdomain");
    sys.domains.push_back(std::move(d));
  }
  if (j.contains("weights"))
    r.numbers(j["weights"], "hierarchy.weights", sys.domain_weights);
  else if (domains.size() == 1)
    sys.domain_weights = {1.0};
  else
    r.fail("hierarchy.weights", "required when there is more than one domain");
}

void read_grid(Reader& r, const json& j, GridSpec& g) {
  if (!r.object(j, "grid", {"n_mu", "n_nu", "nu_min", "nu_max"})) return;
  if (j.contains("n_mu")) r.count(j["n_mu"], "grid.n_mu", g.n_mu);
  if (j.contains("n_nu")) r.count(j["n_nu"], "grid.n_nu", g.n_nu);
  if (j.contains("nu_min")) r.number(j["nu_min"], "grid.nu_min", g.nu_min);
  if (j.contains("nu_max")) r.number(j["nu_max"], "grid.nu_max", g.nu_max);
}

void read_mc(Reader& r, const json& j, McSpec& mc) {
  if (!r.object(j, "mc", {"samples_per_config", "configs_per_domain", "pairing_cap", "seed", "t_grid_size"})) return;
  if (j.contains("samples_per_config")) r.count(j["samples_per_config"], "mc.samples_per_config", mc.samples_per_config);
  if (j.contains("configs_per_domain")) r.count(j["configs_per_domain"], "mc.configs_per_domain", mc.configs_per_domain);
  if (j.contains("pairing_cap")) r.count(j["pairing_cap"], "mc.pairing_cap", mc.pairing_cap);
  if (j.contains("seed")) r.seed(j["seed"], "mc.seed", mc.master_seed);
  if (j.contains("t_grid_size")) r.count(j["t_grid_size"], "mc.t_grid_size", mc.t_grid_size);
}

void read_query(Reader& r, const json& j, ReliabilityQuery& q) {
  if (!r.object(j, "query", {"horizons", "horizon_cdfs"})) return;
  if (j.contains("horizons")) r.integers(j["horizons"], "query.horizons", q.horizons);
  if (j.contains("horizon_cdfs")) r.boolean(j["horizon_cdfs"], "query.horizon_cdfs", q.horizon_cdfs);
}

void read_output(Reader& r, const json& j, OutputSpec& o) {
  if (!r.object(j, "output", {"dir", "csv", "json", "svg"})) return;
  if (j.contains("dir")) r.string(j["dir"], "output.dir", o.dir);
  if (j.contains("csv")) r.boolean(j["csv"], "output.csv", o.csv);
  if (j.contains("json")) r.boolean(j["json"], "output.json", o.json);
  if (j.contains("svg")) r.boolean(j["svg"], "output.svg", o.svg);
}

void read_op_sweep(Reader& r, const json& j, OpSweep& s) {
  if (!r.object(j, "op_sweep", {"target", "domain", "vectors"})) return;
  if (j.contains("target")) {
    std::string t;
    if (r.string(j["target"], "op_sweep.target", t)) {
      if (t == "omega")
        s.target = OpSweep::Target::omega;
      else if (t == "weights")
        s.target = OpSweep::Target::weights;
      else
        r.fail("op_sweep.target", "must be \"omega\" or \"weights\"");
    }
  }
  if (j.contains("domain")) r.count(j["domain"], "op_sweep.domain", s.domain);
  if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty()) {
    r.fail("op_sweep.vectors", "must be a non-empty array of weight vectors");
    return;
  }
  s.vectors.resize(j["vectors"].size());
  for (std::size_t k = 0; k < s.vectors.size(); ++k)
    r.numbers(j["vectors"][k], Reader::index("op_sweep.vectors", k), s.vectors[k]);
}

void read_synthetic(Reader& r, const json& j, SyntheticSpec& s) {
  if (!r.object(j, "synthetic", {"theta_gt", "op_gt", "domain_sizes", "regimes", "noise", "kappa", "methods", "box",
                                       "data_seed", "baseline_samples"}))
    return;
  GroundTruth& gt = s.ground_truth;
  if (j.contains("theta_gt")) r.numbers(j["theta_gt"], "synthetic.theta_gt", gt.theta_gt);
  if (j.contains("op_gt")) r.numbers(j["op_gt"], "synthetic.op_gt", gt.op_gt);
  if (j.contains("domain_sizes")) {
    std::vector<std::int64_t> sizes;
    if (r.integers(j["domain_sizes"], "synthetic.domain_sizes", sizes)) {
      gt.domain_sizes.clear();
      for (const auto v : sizes) gt.domain_sizes.push_back(v > 0 ? static_cast<std::size_t>(v) : 0);
    }
  }
  if (j.contains("regimes")) {
    const json& rj = j["regimes"];
    if (!rj.is_array() || rj.empty()) {
      r.fail("synthetic.regimes", "must be a non-empty array of sample-size vectors");
    } else {
      s.regimes.assign(rj.size(), {});
      for (std::size_t k = 0; k < rj.size(); ++k) r.integers(rj[k], Reader::index("synthetic.regimes", k), s.regimes[k]);
    }
  }
  if (j.contains("noise")) r.number(j["noise"], "synthetic.noise", s.noise);
  if (j.contains("kappa")) r.number(j["kappa"], "synthetic.kappa", s.kappa);
  if (j.contains("methods")) {
    const json& mj = j["methods"];
    if (!mj.is_array() || mj.empty()) {
      r.fail("synthetic.methods", "must be a non-empty array of method names");
    } else {
      s.methods.assign(mj.size(), {});
      for (std::size_t k = 0; k < mj.size(); ++k) {
        const std::string p = Reader::index("synthetic.methods", k);
        if (r.string(mj[k], p, s.methods[k]) && s.methods[k] != kMethodBbUninformative &&
            s.methods[k] != kMethodBbInformative && s.methods[k] != kMethodImprecise)
          r.fail(p, "unknown method '" + s.methods[k] + "'");
      }
    }
  }
  if (j.contains("box")) r.box(j["box"], "synthetic.box", s.box);
  if (j.contains("baseline_samples")) r.count(j["baseline_samples"], "synthetic.baseline_samples", s.baseline_samples);
  if (j.contains("data_seed")) {
    std::uint64_t v = 0;
    if (r.seed(j["data_seed"], "synthetic.data_seed", v)) s.data_seed = v;
  }
}

void check_synthetic(Reader& r, SyntheticSpec& s) {
  if (!(s.noise >= 0.0 && s.noise < 1.0)) r.fail("synthetic.noise", "must lie in [0, 1)");
  if (!(s.kappa > 0.0) || !std::isfinite(s.kappa)) r.fail("synthetic.kappa", "must be finite and positive");
  check_box(r, s.box, "synthetic.box");
  if (s.baseline_samples == 0) r.fail("synthetic.baseline_samples", "must be positive");
  for (std::size_t k = 0; k < s.regimes.size(); ++k) {
    const std::string p = Reader::index("synthetic.regimes", k);
    if (s.regimes[k].size() != s.ground_truth.theta_gt.size())
      r.fail(p, "needs one sample size per subdomain");
    for (const auto n : s.regimes[k])
      if (n < 0) r.fail(p, "sample sizes must be >= 0");
  }
  if (!s.regimes.empty()) s.ground_truth.sample_sizes = s.regimes.front();
  try {
    s.ground_truth.check();
  } catch (const ConfigError& e) {
    for (const auto& i : e.issues()) {
      if (i.path.find("sample_sizes") != std::string::npos) continue;  // reported per regime above
      r.fail(rename_path(i.path), i.message);
    }
  }
}

void rethrow_renamed(const ConfigError& e, Reader& r, const std::string& prefix = {}) {
  for (const auto& i : e.issues()) r.fail(prefix.empty() ? rename_path(i.path) : prefix + ": " + rename_path(i.path), i.message);
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

}  // namespace

Settings apply_op_sweep(const Settings& base, const OpSweep& sweep, std::size_t index) {
  Settings s = base;
  const auto& v = sweep.vectors.at(index);
  if (sweep.target == OpSweep::Target::weights) {
    s.system.domain_weights = v;
  } else {
    if (sweep.domain >= s.system.domains.size())
      throw ConfigError("op_sweep.domain", fmt::format("no domain with index {}", sweep.domain));
    s.system.domains[sweep.domain].op_weights = v;
  }
  return validate(s);
}

Settings apply_hyper_box(const Settings& base, const HyperBox& box) {
  Settings s = base;
  for (auto& d : s.system.domains) d.box = box;
  return validate(s);
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ConfigError(source, fmt::format("malformed JSON at line {}, column {}: {}", line, col, e.what()));
  }

  Reader r;
  RunConfig cfg;
  if (!r.object(root, "", {"schema_version", "hierarchy", "grid", "mc", "query", "output", "hyper_sweep", "op_sweep",
                           "synthetic"}))
    throw ConfigError(std::move(r.issues));

  if (!root.contains("schema_version")) {
    r.fail("schema_version", "required");
  } else {
    std::int64_t v = 0;
    if (r.integer(root["schema_version"], "schema_version", v) && v != kSchemaVersion)
      r.fail("schema_version", fmt::format("unsupported version {} (expected {})", v, kSchemaVersion));
  }
  if (root.contains("hierarchy")) {
    cfg.has_hierarchy = true;
    read_hierarchy(r, root["hierarchy"], cfg.settings.system);
  }
  if (root.contains("grid")) read_grid(r, root["grid"], cfg.settings.grid);
  if (root.contains("mc")) read_mc(r, root["mc"], cfg.settings.mc);
  if (root.contains("query")) read_query(r, root["query"], cfg.settings.query);
  if (root.contains("output")) read_output(r, root["output"], cfg.output);
  if (root.contains("hyper_sweep")) {
    const json& hj = root["hyper_sweep"];
    if (!hj.is_array() || hj.empty()) {
      r.fail("hyper_sweep", "must be a non-empty array of boxes");
    } else {
      cfg.hyper_sweep.assign(hj.size(), HyperBox{});
      for (std::size_t k = 0; k < hj.size(); ++k) {
        const std::string p = Reader::index("hyper_sweep", k);
        r.box(hj[k], p, cfg.hyper_sweep[k]);
        check_box(r, cfg.hyper_sweep[k], p);
      }
    }
  }
  if (root.contains("op_sweep")) {
    OpSweep s;
    read_op_sweep(r, root["op_sweep"], s);
    cfg.op_sweep = std::move(s);
  }
  if (root.contains("synthetic")) read_synthetic(r, root["synthetic"], cfg.synthetic);
  check_synthetic(r, cfg.synthetic);
  if (!r.issues.empty()) throw ConfigError(std::move(r.issues));

  try {
    if (cfg.has_hierarchy) {
      cfg.settings = validate(cfg.settings);
    } else {
      // Grid and Monte Carlo settings still need checking for synth/bench runs.
      auto issues = collect_issues(bench_system(1, 1), cfg.settings.grid, cfg.settings.mc, cfg.settings.query);
      if (!issues.empty()) throw ConfigError(std::move(issues));
    }
  } catch (const ConfigError& e) {
    rethrow_renamed(e, r);
  }
  if (cfg.has_hierarchy && r.issues.empty()) {
    if (cfg.op_sweep) {
      if (cfg.op_sweep->target == OpSweep::Target::omega && cfg.op_sweep->domain >= cfg.settings.system.domains.size())
        r.fail("op_sweep.domain", fmt::format("no domain with index {}", cfg.op_sweep->domain));
      else
        for (std::size_t k = 0; k < cfg.op_sweep->vectors.size(); ++k) {
          try {
            apply_op_sweep(cfg.settings, *cfg.op_sweep, k);
          } catch (const ConfigError& e) {
            for (const auto& i : e.issues())
              r.fail(Reader::index("op_sweep.vectors", k), rename_path(i.path) + ": " + i.message);
          }
        }
    }
  } else if (cfg.op_sweep && r.issues.empty()) {
    r.fail("op_sweep", "requires a hierarchy");
  }
  if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file '" + path.string() + "'");
  return parse_config_text(buf.str(), path.string());
}

json to_json(const HyperBox& box) {
  return {{"a", interval_json(box.a)}, {"b", interval_json(box.b)}, {"c", interval_json(box.c)},
          {"d", interval_json(box.d)}};
}

json to_json(const SystemSpec& system) {
  json domains = json::array();
  for (const auto& d : system.domains) {
    json subs = json::array();
    for (const auto& s : d.subdomains) subs.push_back({{"label", s.label}, {"correct", s.correct}, {"total", s.total}});
    domains.push_back({{"label", d.label}, {"omega", d.op_weights}, {"box", to_json(d.box)}, {"subdomains", subs}});
  }
  return {{"domains", domains}, {"weights", system.domain_weights}};
}

json to_json(const RunConfig& c) {
  const auto& s = c.settings;
  json out = {{"schema_version", kSchemaVersion}};
  if (c.has_hierarchy) out["hierarchy"] = to_json(s.system);
  out["grid"] = {{"n_mu", s.grid.n_mu}, {"n_nu", s.grid.n_nu}, {"nu_min", s.grid.nu_min}, {"nu_max", s.grid.nu_max}};
  out["mc"] = {{"samples_per_config", s.mc.samples_per_config},
               {"configs_per_domain", s.mc.configs_per_domain},
               {"pairing_cap", s.mc.pairing_cap},
               {"seed", s.mc.master_seed},
               {"t_grid_size", s.mc.t_grid_size}};
  out["query"] = {{"horizons", s.query.horizons}, {"horizon_cdfs", s.query.horizon_cdfs}};
  out["output"] = {{"dir", c.output.dir}, {"csv", c.output.csv}, {"json", c.output.json}, {"svg", c.output.svg}};
  if (!c.hyper_sweep.empty()) {
    json boxes = json::array();
    for (const auto& b : c.hyper_sweep) boxes.push_back(to_json(b));
    out["hyper_sweep"] = boxes;
  }
  if (c.op_sweep) {
    out["op_sweep"] = {{"target", c.op_sweep->target == OpSweep::Target::omega ? "omega" : "weights"},
                       {"domain", c.op_sweep->domain},
                       {"vectors", c.op_sweep->vectors}};
  }
  const auto& syn = c.synthetic;
  out["synthetic"] = {{"theta_gt", syn.ground_truth.theta_gt},
                      {"op_gt", syn.ground_truth.op_gt},
                      {"domain_sizes", syn.ground_truth.domain_sizes},
                      {"regimes", syn.regimes},
                      {"noise", syn.noise},
                      {"kappa", syn.kappa},
                      {"methods", syn.methods},
                      {"box", to_json(syn.box)},
                      {"baseline_samples", syn.baseline_samples}};
  if (syn.data_seed) out["synthetic"]["data_seed"] = *syn.data_seed;
  return out;
}

Rq5Settings rq5_settings(const RunConfig& config) {
  Rq5Settings r;
  r.grid = config.settings.grid;
  r.mc = config.settings.mc;
  r.box = config.synthetic.box;
  r.noise = config.synthetic.noise;
  r.kappa = config.synthetic.kappa;
  r.methods = config.synthetic.methods;
  r.data_seed = config.synthetic.data_seed;
  r.baseline_samples = config.synthetic.baseline_samples;
  return r;
}

}  // namespace credrel
