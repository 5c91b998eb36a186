#pragma once

// CSV / JSON / SVG emitters for inference reports, synthetic comparison
// tables and scaling records.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "credrel/baselines.hpp"
#include "credrel/harness.hpp"
#include "credrel/inference.hpp"

namespace credrel {

/// Nine significant digits, as used in every CSV.
std::string format_number(double v);

/// Stable 64-bit fingerprint of a resolved config (hex), for CSV headers.
std::string config_fingerprint(const nlohmann::json& resolved_config);

/// Header comment lines ("# ...") shared by every CSV.
struct CsvHeader {
  std::uint64_t seed = 0;
  std::string config;       // path or name of the config
  std::string fingerprint;  // config_fingerprint of the resolved config
};

/// Columns: level,entity,t,lower,upper. T rows per entity.
void write_envelopes_csv(std::ostream& out, const InferenceReport& report, const CsvHeader& header);

/// Per-horizon R(n_F) CDF envelopes; same columns as write_envelopes_csv.
/// Only entities whose reliability curve carries CDFs contribute.
void write_horizon_envelopes_csv(std::ostream& out, const InferenceReport& report, std::size_t horizon_index,
                                 const CsvHeader& header);

/// Columns: level,entity,n_F,expected_lower,expected_upper.
void write_reliability_csv(std::ostream& out, const InferenceReport& report, const CsvHeader& header);

nlohmann::json to_json(const InferenceReport& report);
InferenceReport report_from_json(const nlohmann::json& j);

/// Report plus config echo and seed: the full emitted document.
nlohmann::json report_document(const InferenceReport& report, const nlohmann::json& resolved_config);

struct SvgOptions {
  std::string title = "Posterior CDF envelopes";
  int panel_width = 320;
  int panel_height = 240;
  int columns = 3;
};

/// Static SVG: one panel per entity, each with a shaded band between lower
/// and upper CDF, axes and labels.
std::string render_svg(const InferenceReport& report, const SvgOptions& options = {});

void write_rq5_csv(std::ostream& out, const std::vector<Rq5Row>& rows, double p_gt, const CsvHeader& header);
nlohmann::json to_json(const std::vector<Rq5Row>& rows, double p_gt);

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRecord>& records, const PowerLawFit& fit,
                       const CsvHeader& header);
nlohmann::json to_json(const std::vector<ScalingRecord>& records, const PowerLawFit& fit);

struct BaselineResult {
  std::string entity;
  BetaPosterior prior;
  std::int64_t correct = 0;
  std::int64_t total = 0;
  BetaPosterior posterior;
  std::vector<std::int64_t> horizons;
  std::vector<double> expected;  // E[theta^n_F]
};

BaselineResult run_baseline(const std::string& entity, std::int64_t correct, std::int64_t total,
                            const BetaPosterior& prior, const std::vector<std::int64_t>& horizons);

/// Human-readable block: posterior parameters, mean, E[R(n_F)] lines.
std::string format_baseline(const BaselineResult& r);

/// Creates parent directories as needed; IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace credrel
