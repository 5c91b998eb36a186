#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <sstream>

#include "credrel/config.hpp"
#include "credrel/report_io.hpp"
#include "fixtures.hpp"

using namespace credrel;

namespace {

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

const InferenceReport& sample_report() {
  static const InferenceReport r = [] {
    Settings s = fixture::small_settings(fixture::table1_system());
    s.mc.t_grid_size = 201;
    s.query.horizon_cdfs = true;
    return infer(s);
  }();
  return r;
}

std::size_t count_bands(const boost::property_tree::ptree& node) {
  std::size_t n = 0;
  for (const auto& [name, child] : node) {
    if (name == "path" && child.get<std::string>("<xmlattr>.class", "") == "band") ++n;
    n += count_bands(child);
  }
  return n;
}

}  // namespace

TEST_SUITE("report_io") {
  TEST_CASE("number formatting") {
    CHECK(format_number(5.0) == "5");
    CHECK(format_number(5.0 / 14.0) == "0.357142857");
    CHECK(format_number(1e-12) == "1e-12");
  }

  TEST_CASE("envelope CSV layout") {
    const auto& r = sample_report();
    std::ostringstream out;
    write_envelopes_csv(out, r, {42, "cfg.json", "abc"});
    const std::string csv = out.str();
    CHECK(csv.find("# seed: 42") != std::string::npos);
    CHECK(csv.find("cfg.json") != std::string::npos);
    const auto lines = data_lines(csv);
    CHECK(lines.front() == "level,entity,t,lower,upper");
    CHECK(lines.size() == 1 + 201 * r.entities.size());
    std::size_t mbpp = 0;
    for (const auto& l : lines) mbpp += l.rfind("subdomain,Code/MBPP,", 0) == 0 ? 1 : 0;
    CHECK(mbpp == 201);
  }

  TEST_CASE("reliability CSV layout") {
    const auto& r = sample_report();
    std::ostringstream out;
    write_reliability_csv(out, r, {1, "", "x"});
    const auto lines = data_lines(out.str());
    CHECK(lines.front() == "level,entity,n_F,expected_lower,expected_upper");
    CHECK(lines.size() == 1 + 3 * r.entities.size());
    CHECK(lines.back().rfind("system,system,100,", 0) == 0);

    std::ostringstream h;
    write_horizon_envelopes_csv(h, r, 1, {1, "", "x"});
    CHECK(h.str().find("n_F = 10") != std::string::npos);
    CHECK(data_lines(h.str()).size() == 1 + 201 * r.entities.size());
  }

  TEST_CASE("JSON round trip") {
    const auto& r = sample_report();
    const nlohmann::json j = to_json(r);
    CHECK(report_from_json(nlohmann::json::parse(j.dump())) == r);
    RunConfig c;
    c.settings = fixture::small_settings(fixture::table1_system());
    c.has_hierarchy = true;
    const auto doc = report_document(r, to_json(c));
    CHECK(doc["seed"] == r.master_seed);
    CHECK(doc["config"]["mc"]["seed"] == c.settings.mc.master_seed);
    CHECK(report_from_json(doc) == r);
    CHECK_THROWS_AS(report_from_json(nlohmann::json::object()), IoError);
  }

  TEST_CASE("SVG is well-formed with one band per entity") {
    const auto& r = sample_report();
    const std::string svg = render_svg(r);
    std::istringstream in(svg);
    boost::property_tree::ptree tree;
    REQUIRE_NOTHROW(boost::property_tree::read_xml(in, tree));
    CHECK(count_bands(tree) == r.entities.size());
    CHECK(svg.find("<script") == std::string::npos);
    CHECK(svg.find(">t</text>") != std::string::npos);
  }

  TEST_CASE("output is byte-identical across thread counts") {
    Settings s = fixture::small_settings(fixture::table1_system());
    EngineOptions one, four;
    four.threads = 4;
    const auto a = infer(s, one);
    const auto b = infer(s, four);
    std::ostringstream ca, cb;
    write_envelopes_csv(ca, a, {s.mc.master_seed, "x", "y"});
    write_envelopes_csv(cb, b, {s.mc.master_seed, "x", "y"});
    CHECK(ca.str() == cb.str());
    CHECK(to_json(a).dump() == to_json(b).dump());
  }

  TEST_CASE("config fingerprint is stable and sensitive") {
    RunConfig c;
    const auto a = config_fingerprint(to_json(c));
    CHECK(a == config_fingerprint(to_json(c)));
    c.settings.mc.master_seed += 1;
    CHECK(a != config_fingerprint(to_json(c)));
    CHECK(a.size() == 16);
  }

  TEST_CASE("baseline text") {
    const BaselineResult r = run_baseline("", 3, 10, {2.0, 2.0}, {1, 10});
    const std::string text = format_baseline(r);
    CHECK(text.find("posterior  Beta(5, 9)") != std::string::npos);
    CHECK(text.find("mean       0.357142857") != std::string::npos);
    CHECK(r.expected[0] == doctest::Approx(5.0 / 14.0));
    CHECK(text.find("\nE[R(1)]    0.357142857\n") != std::string::npos);
    CHECK(text.find("\nE[R(10)]   ") != std::string::npos);
  }

  TEST_CASE("synthetic and scaling tables") {
    std::vector<Rq5Row> rows{{0, {1, 2}, "gt", {"bb-uninf", {0.5, 0.5}, {0.1, 0.1}, {0.4, 0.6}}}};
    std::ostringstream out;
    write_rq5_csv(out, rows, 0.6, {1, "", "x"});
    const auto lines = data_lines(out.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "0,1 2,gt,bb-uninf,0.5,0.5,0.1,0.1,0.4,0.6");
    CHECK(to_json(rows, 0.6)["rows"][0]["interval_90"][1] == 0.6);

    std::ostringstream sc;
    write_scaling_csv(sc, {{"G", 500, 1.5, 1024}}, {0.01, 0.95}, {1, "", "x"});
    CHECK(sc.str().find("x^0.95") != std::string::npos);
    CHECK(data_lines(sc.str())[1] == "G,500,1.5,1024");
  }
}
