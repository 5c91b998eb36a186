#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "credrel/config.hpp"
#include "credrel/error.hpp"

using namespace credrel;

namespace {

const std::string kConfigDir = CREDREL_CONFIG_DIR;

ConfigError parse_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", "");
}

bool has_path(const ConfigError& e, const std::string& path) {
  return std::any_of(e.issues().begin(), e.issues().end(), [&](const ValidationIssue& i) { return i.path == path; });
}

const char* kTwoSub = R"({
  "schema_version": 1,
  "hierarchy": {"domains": [{"label": "Code", "subdomains": [
    {"label": "A", "correct": 3, "total": 10}, {"label": "B", "correct": 4, "total": 9}]}]}
})";

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("minimal config fills in defaults") {
    const RunConfig c = parse_config(kConfigDir + "/minimal.json");
    CHECK(c.has_hierarchy);
    CHECK(c.settings.grid == GridSpec{});
    CHECK(c.settings.mc == McSpec{});
    CHECK(c.settings.query == ReliabilityQuery{});
    CHECK(c.settings.system.domains[0].op_weights == std::vector<double>{1.0});
    CHECK(c.settings.system.domain_weights == std::vector<double>{1.0});
    CHECK(c.settings.system.domains[0].box == HyperBox{});
    CHECK(c.output == OutputSpec{});
  }

  TEST_CASE("omitted omega is named") {
    const auto e = parse_error(kTwoSub);
    CHECK(has_path(e, "hierarchy.domains[0].omega"));
    CHECK(std::string(e.what()).find("hierarchy.domains[0].omega") != std::string::npos);
  }

  TEST_CASE("shipped configs are valid") {
    const RunConfig c = parse_config(kConfigDir + "/gpt4o_mini.json");
    CHECK(c.settings.system.domain_weights == std::vector<double>{0.149, 0.851});
    CHECK(c.settings.system.domains[0].op_weights == std::vector<double>{0.204, 0.796});
    CHECK(c.settings.system.domains[1].subdomains[1].total == 3712);
    for (const auto& entry : std::filesystem::directory_iterator(kConfigDir)) {
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(parse_config(entry.path()));
    }
    const RunConfig op = parse_config(kConfigDir + "/sweep_op.json");
    REQUIRE(op.op_sweep);
    CHECK(op.op_sweep->vectors.size() == 3);
    CHECK(op.op_sweep->vectors[1][1] == 0.517);
    CHECK(parse_config(kConfigDir + "/sweep_hyper.json").hyper_sweep.size() == 3);
  }

  TEST_CASE("unknown keys are rejected") {
    const auto e = parse_error(R"({"schema_version": 1, "grid": {"n_mu": 10, "nmu": 3}, "extra": true})");
    CHECK(has_path(e, "grid.nmu"));
    CHECK(has_path(e, "extra"));
  }

  TEST_CASE("malformed JSON reports line and column") {
    const auto e = parse_error("{\n  \"schema_version\": 1,\n  \"grid\": {\"n_mu\": }\n}");
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }

  TEST_CASE("type and range errors carry paths") {
    const auto e = parse_error(R"({"schema_version": 1,
      "hierarchy": {"domains": [{"subdomains": [{"correct": "3", "total": 10.5}]}]},
      "mc": {"seed": -4, "samples_per_config": -1}})");
    CHECK(has_path(e, "hierarchy.domains[0].subdomains[0].correct"));
    CHECK(has_path(e, "hierarchy.domains[0].subdomains[0].total"));
    CHECK(has_path(e, "mc.seed"));
    CHECK(has_path(e, "mc.samples_per_config"));
  }

  TEST_CASE("schema version is required and checked") {
    CHECK(has_path(parse_error("{}"), "schema_version"));
    CHECK(has_path(parse_error(R"({"schema_version": 2})"), "schema_version"));
  }

  TEST_CASE("validation errors are mapped to config paths") {
    const auto e = parse_error(R"({"schema_version": 1, "hierarchy": {"domains": [
      {"omega": [0.5, 0.6], "subdomains": [{"correct": 1, "total": 2}, {"correct": 5, "total": 3}]}]}})");
    CHECK(has_path(e, "hierarchy.domains[0].omega"));
    CHECK(std::any_of(e.issues().begin(), e.issues().end(), [](const ValidationIssue& i) {
      return i.path.rfind("hierarchy.domains[0].subdomains[1]", 0) == 0;
    }));
  }

  TEST_CASE("weights required for several domains") {
    const auto e = parse_error(R"({"schema_version": 1, "hierarchy": {"domains": [
      {"subdomains": [{"correct": 1, "total": 2}]}, {"subdomains": [{"correct": 1, "total": 2}]}]}})");
    CHECK(has_path(e, "hierarchy.weights"));
  }

  TEST_CASE("sweeps are checked against the hierarchy") {
    const auto e = parse_error(R"({"schema_version": 1,
      "hierarchy": {"domains": [{"subdomains": [{"correct": 1, "total": 2}]}]},
      "op_sweep": {"target": "omega", "domain": 3, "vectors": [[1.0]]},
      "hyper_sweep": [{"a": [5, 1]}]})");
    CHECK(has_path(e, "hyper_sweep[0].a"));
    const auto e2 = parse_error(R"({"schema_version": 1,
      "hierarchy": {"domains": [{"subdomains": [{"correct": 1, "total": 2}]}]},
      "op_sweep": {"target": "omega", "domain": 0, "vectors": [[0.7]]}})");
    CHECK(has_path(e2, "op_sweep.vectors[0]"));
  }

  TEST_CASE("synthetic section") {
    const RunConfig c = parse_config(kConfigDir + "/synthetic.json");
    CHECK_FALSE(c.has_hierarchy);
    CHECK(c.synthetic.ground_truth == GroundTruth::reference());
    CHECK(c.synthetic.regimes.size() == 2);
    const auto e = parse_error(R"({"schema_version": 1, "synthetic": {"regimes": [[1, 2]], "methods": ["mcmc"]}})");
    CHECK(has_path(e, "synthetic.regimes[0]"));
    CHECK(has_path(e, "synthetic.methods[0]"));
    CHECK(c.synthetic.baseline_samples == 40000);
    CHECK(has_path(parse_error(R"({"schema_version": 1, "synthetic": {"baseline_samples": 0}})"),
                   "synthetic.baseline_samples"));
    const RunConfig seeded = parse_config_text(R"({"schema_version": 1, "synthetic": {"data_seed": 404}})");
    CHECK(seeded.synthetic.data_seed == std::optional<std::uint64_t>{404});
    CHECK(rq5_settings(seeded).data_seed == seeded.synthetic.data_seed);
  }

  TEST_CASE("resolved config round-trips") {
    for (const char* name : {"/minimal.json", "/gpt4o_mini.json", "/sweep_op.json", "/sweep_hyper.json", "/synthetic.json"}) {
      const RunConfig c = parse_config(kConfigDir + name);
      const RunConfig back = parse_config_text(to_json(c).dump());
      CAPTURE(name);
      CHECK(back == c);
    }
  }

  TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(parse_config("/nonexistent/config.json"), IoError);
  }

  TEST_CASE("sweep application") {
    const RunConfig c = parse_config(kConfigDir + "/sweep_op.json");
    const Settings s = apply_op_sweep(c.settings, *c.op_sweep, 2);
    CHECK(s.system.domains[1].op_weights == std::vector<double>{0.10, 0.90});
    const HyperBox box{{2, 3}, {2, 3}, {2, 3}, {2, 3}};
    const Settings h = apply_hyper_box(c.settings, box);
    for (const auto& d : h.system.domains) CHECK(d.box == box);
  }
}
