#include "credrel/report_io.hpp"

#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "credrel/error.hpp"

namespace credrel {
namespace {

using nlohmann::json;

void write_header(std::ostream& out, const CsvHeader& h, const std::string& what) {
  out << "# " << what << "\n";
  out << "# seed: " << h.seed << "\n";
  out << "# config: " << (h.config.empty() ? "-" : h.config) << " (" << h.fingerprint << ")\n";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

// Entity names may contain commas; quote those per RFC 4180.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_envelope_rows(std::ostream& out, const std::string& level, const std::string& entity,
                         const std::vector<double>& t, const CdfEnvelope& env) {
  for (std::size_t k = 0; k < t.size(); ++k)
    out << level << ',' << csv_field(entity) << ',' << format_number(t[k]) << ',' << format_number(env.lower[k])
        << ',' << format_number(env.upper[k]) << '\n';
}

json envelope_json(const CdfEnvelope& e) {
  json j = {{"lower", e.lower}, {"upper", e.upper}};
  if (!e.members.empty()) j["members"] = e.members;
  return j;
}

CdfEnvelope envelope_from_json(const json& j) {
  CdfEnvelope e;
  j.at("lower").get_to(e.lower);
  j.at("upper").get_to(e.upper);
  if (j.contains("members")) j.at("members").get_to(e.members);
  return e;
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

}  // namespace

std::string format_number(double v) { return fmt::format("{:.9g}", v); }

std::string config_fingerprint(const json& resolved_config) {
  // FNV-1a over the canonical dump (keys are sorted by nlohmann::json).
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : resolved_config.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

void write_envelopes_csv(std::ostream& out, const InferenceReport& report, const CsvHeader& header) {
  write_header(out, header, "posterior CDF envelopes of p");
  out << "level,entity,t,lower,upper\n";
  for (const auto& e : report.entities) write_envelope_rows(out, to_string(e.level), e.entity, report.t.t, e.cdf);
}

void write_horizon_envelopes_csv(std::ostream& out, const InferenceReport& report, std::size_t horizon_index,
                                 const CsvHeader& header) {
  std::int64_t n_F = 0;
  for (const auto& e : report.entities)
    if (horizon_index < e.reliability.horizons.size()) n_F = e.reliability.horizons[horizon_index];
  write_header(out, header, fmt::format("CDF envelopes of R(n_F), n_F = {}", n_F));
  out << "level,entity,t,lower,upper\n";
  for (const auto& e : report.entities) {
    if (horizon_index >= e.reliability.cdfs.size()) continue;
    write_envelope_rows(out, to_string(e.level), e.entity, report.t.t, e.reliability.cdfs[horizon_index]);
  }
}

void write_reliability_csv(std::ostream& out, const InferenceReport& report, const CsvHeader& header) {
  write_header(out, header, "expected future reliability E[R(n_F)] envelopes");
  out << "level,entity,n_F,expected_lower,expected_upper\n";
  for (const auto& e : report.entities) {
    const auto& r = e.reliability;
    for (std::size_t k = 0; k < r.horizons.size(); ++k)
      out << to_string(e.level) << ',' << csv_field(e.entity) << ',' << r.horizons[k] << ','
          << format_number(r.expected_lower[k]) << ',' << format_number(r.expected_upper[k]) << '\n';
  }
}

json to_json(const InferenceReport& report) {
  json configs = json::array();
  for (const auto& dom : report.configs) {
    json list = json::array();
    for (const auto& h : dom) list.push_back(json::array({h.a, h.b, h.c, h.d}));
    configs.push_back(list);
  }
  json entities = json::array();
  for (const auto& e : report.entities) {
    json cdfs = json::array();
    for (const auto& c : e.reliability.cdfs) cdfs.push_back(envelope_json(c));
    json rel = {{"horizons", e.reliability.horizons},
                {"expected_lower", e.reliability.expected_lower},
                {"expected_upper", e.reliability.expected_upper}};
    if (!cdfs.empty()) rel["cdfs"] = cdfs;
    entities.push_back({{"level", to_string(e.level)},
                        {"entity", e.entity},
                        {"cdf", envelope_json(e.cdf)},
                        {"mean", json::array({e.mean_lower, e.mean_upper})},
                        {"reliability", rel}});
  }
  return {{"seed", report.master_seed},
          {"t", report.t.t},
          {"configs", configs},
          {"pairing_count", report.pairing_count},
          {"entities", entities}};
}

InferenceReport report_from_json(const json& j) {
  try {
    InferenceReport r;
    r.master_seed = j.at("seed").get<std::uint64_t>();
    j.at("t").get_to(r.t.t);
    r.pairing_count = j.at("pairing_count").get<std::size_t>();
    for (const auto& dom : j.at("configs")) {
      std::vector<HyperConfig> list;
      for (const auto& h : dom) list.push_back({h.at(0).get<double>(), h.at(1).get<double>(), h.at(2).get<double>(),
                                                h.at(3).get<double>()});
      r.configs.push_back(std::move(list));
    }
    for (const auto& ej : j.at("entities")) {
      EntityReport e;
      e.level = level_from_string(ej.at("level").get<std::string>());
      e.entity = ej.at("entity").get<std::string>();
      e.cdf = envelope_from_json(ej.at("cdf"));
      e.mean_lower = ej.at("mean").at(0).get<double>();
      e.mean_upper = ej.at("mean").at(1).get<double>();
      const json& rel = ej.at("reliability");
      rel.at("horizons").get_to(e.reliability.horizons);
      rel.at("expected_lower").get_to(e.reliability.expected_lower);
      rel.at("expected_upper").get_to(e.reliability.expected_upper);
      if (rel.contains("cdfs"))
        for (const auto& c : rel.at("cdfs")) e.reliability.cdfs.push_back(envelope_from_json(c));
      r.entities.push_back(std::move(e));
    }
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report JSON: ") + e.what());
  }
}

json report_document(const InferenceReport& report, const json& resolved_config) {
  json doc = to_json(report);
  doc["config"] = resolved_config;
  return doc;
}

std::string render_svg(const InferenceReport& report, const SvgOptions& o) {
  const std::size_t n = report.entities.size();
  const int cols = std::max(1, std::min<int>(o.columns, static_cast<int>(std::max<std::size_t>(n, 1))));
  const int rows = static_cast<int>((n + static_cast<std::size_t>(cols) - 1) / static_cast<std::size_t>(cols));
  constexpr int kMarginL = 48, kMarginR = 16, kMarginT = 28, kMarginB = 40, kTitle = 32;
  const int pw = o.panel_width, ph = o.panel_height;
  const int iw = pw - kMarginL - kMarginR, ih = ph - kMarginT - kMarginB;
  const int width = cols * pw;
  const int height = kTitle + std::max(rows, 1) * ph;

  std::string s;
  s += fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      width, height);
  s += "<style>.band{fill:#4c72b0;fill-opacity:0.35;stroke:none}.bound{fill:none;stroke:#4c72b0;stroke-width:1}"
       ".axis{stroke:#333;stroke-width:1}text{font-family:sans-serif;font-size:11px;fill:#222}</style>\n";
  s += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" style=\"font-size:14px\">{}</text>\n", width / 2,
                   xml_escape(o.title));

  const auto& t = report.t.t;
  for (std::size_t e = 0; e < n; ++e) {
    const auto& ent = report.entities[e];
    const int x0 = static_cast<int>(e % static_cast<std::size_t>(cols)) * pw + kMarginL;
    const int y0 = kTitle + static_cast<int>(e / static_cast<std::size_t>(cols)) * ph + kMarginT;
    auto px = [&](double v) { return x0 + v * iw; };
    auto py = [&](double v) { return y0 + (1.0 - v) * ih; };

    std::string band, upper, lower;
    for (std::size_t k = 0; k < t.size(); ++k) {
      band += fmt::format("{}{:.2f},{:.2f}", k == 0 ? "M" : " L", px(t[k]), py(ent.cdf.upper[k]));
      upper += fmt::format("{}{:.2f},{:.2f}", k == 0 ? "" : " ", px(t[k]), py(ent.cdf.upper[k]));
      lower += fmt::format("{}{:.2f},{:.2f}", k == 0 ? "" : " ", px(t[k]), py(ent.cdf.lower[k]));
    }
    for (std::size_t k = t.size(); k-- > 0;) band += fmt::format(" L{:.2f},{:.2f}", px(t[k]), py(ent.cdf.lower[k]));
    band += " Z";

    const std::string label = xml_escape(ent.entity);
    s += fmt::format("<g class=\"panel\" data-level=\"{}\" data-entity=\"{}\">\n", to_string(ent.level), label);
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{} ({})</text>\n", x0 + iw / 2, y0 - 8, label,
                     to_string(ent.level));
    s += fmt::format("<path class=\"band\" d=\"{}\"/>\n", band);
    s += fmt::format("<polyline class=\"bound\" points=\"{}\"/>\n", upper);
    s += fmt::format("<polyline class=\"bound\" points=\"{}\"/>\n", lower);
    s += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>\n", x0, y0 + ih, x0 + iw);
    s += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>\n", x0, y0, y0 + ih);
    for (const double tick : {0.0, 0.5, 1.0}) {
      s += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{:g}</text>\n", px(tick), y0 + ih + 14,
                       tick);
      s += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:g}</text>\n", x0 - 4, py(tick) + 4, tick);
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">t</text>\n", x0 + iw / 2, y0 + ih + 30);
    s += fmt::format("<text x=\"{0}\" y=\"{1}\" text-anchor=\"middle\" transform=\"rotate(-90 {0} {1})\">F(t)</text>\n",
                     x0 - 34, y0 + ih / 2);
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_rq5_csv(std::ostream& out, const std::vector<Rq5Row>& rows, double p_gt, const CsvHeader& header) {
  write_header(out, header, fmt::format("synthetic ground-truth comparison, p_L_gt = {}; quantiles type 7",
                                        format_number(p_gt)));
  out << "regime,sample_sizes,op,method,median_lower,median_upper,error_lower,error_upper,q05,q95\n";
  for (const auto& r : rows) {
    std::string sizes;
    for (std::size_t k = 0; k < r.sample_sizes.size(); ++k) sizes += (k ? " " : "") + std::to_string(r.sample_sizes[k]);
    const auto& m = r.summary;
    out << r.regime << ',' << sizes << ',' << r.op << ',' << m.method << ',' << format_number(m.median.lo) << ','
        << format_number(m.median.hi) << ',' << format_number(m.error.lo) << ',' << format_number(m.error.hi) << ','
        << format_number(m.interval_90.lo) << ',' << format_number(m.interval_90.hi) << '\n';
  }
}

json to_json(const std::vector<Rq5Row>& rows, double p_gt) {
  json list = json::array();
  for (const auto& r : rows) {
    list.push_back({{"regime", r.regime},
                    {"sample_sizes", r.sample_sizes},
                    {"op", r.op},
                    {"method", r.summary.method},
                    {"median", interval_json(r.summary.median)},
                    {"error", interval_json(r.summary.error)},
                    {"interval_90", interval_json(r.summary.interval_90)}});
  }
  return {{"p_L_gt", p_gt}, {"quantile_rule", "type7"}, {"rows", list}};
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRecord>& records, const PowerLawFit& fit,
                       const CsvHeader& header) {
  write_header(out, header, fmt::format("scaling sweep; fit time = {} * x^{}", format_number(fit.scale),
                                        format_number(fit.exponent)));
  out << "parameter,value,seconds,peak_bytes\n";
  for (const auto& r : records)
    out << r.parameter << ',' << format_number(r.value) << ',' << format_number(r.seconds) << ',' << r.peak_bytes
        << '\n';
}

json to_json(const std::vector<ScalingRecord>& records, const PowerLawFit& fit) {
  json list = json::array();
  for (const auto& r : records)
    list.push_back({{"parameter", r.parameter}, {"value", r.value}, {"seconds", r.seconds}, {"peak_bytes", r.peak_bytes}});
  return {{"records", list}, {"fit", {{"scale", fit.scale}, {"exponent", fit.exponent}}}};
}

BaselineResult run_baseline(const std::string& entity, std::int64_t correct, std::int64_t total,
                            const BetaPosterior& prior, const std::vector<std::int64_t>& horizons) {
  BaselineResult r{entity, prior, correct, total, bb_update(correct, total, prior), horizons, {}};
  for (const auto n : horizons) r.expected.push_back(bb_expected_future_reliability(r.posterior, n));
  return r;
}

std::string format_baseline(const BaselineResult& r) {
  std::string s;
  if (!r.entity.empty()) s += fmt::format("[{}]\n", r.entity);
  s += fmt::format("prior      Beta({}, {})\n", format_number(r.prior.alpha), format_number(r.prior.beta));
  s += fmt::format("data       C = {}, N = {}\n", r.correct, r.total);
  s += fmt::format("posterior  Beta({}, {})\n", format_number(r.posterior.alpha), format_number(r.posterior.beta));
  s += fmt::format("mean       {}\n", format_number(r.posterior.mean()));
  for (std::size_t k = 0; k < r.horizons.size(); ++k)
    s += fmt::format("{:<11}{}\n", fmt::format("E[R({})]", r.horizons[k]), format_number(r.expected[k]));
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace credrel
