#pragma once

// JSON run configuration. Strict: unknown keys are errors, every error
// carries a field path (or line/column for malformed JSON).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "credrel/harness.hpp"
#include "credrel/model.hpp"

namespace credrel {

inline constexpr int kSchemaVersion = 1;

struct OutputSpec {
  std::string dir = "out";
  bool csv = true;
  bool json = true;
  bool svg = false;
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// Alternative operational profiles: either Omega of one domain or the
/// domain weights W.
struct OpSweep {
  enum class Target { omega, weights };
  Target target = Target::omega;
  std::size_t domain = 0;
  std::vector<std::vector<double>> vectors;
  friend bool operator==(const OpSweep&, const OpSweep&) = default;
};

struct SyntheticSpec {
  GroundTruth ground_truth = GroundTruth::reference();
  std::vector<std::vector<std::int64_t>> regimes{kSmallN, kLargeN};
  double noise = 0.2;
  double kappa = 50.0;
  std::vector<std::string> methods{kMethodBbUninformative, kMethodBbInformative, kMethodImprecise};
  HyperBox box;
  std::size_t baseline_samples = kDefaultBaselineSamples;
  std::optional<std::uint64_t> data_seed;
  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

struct RunConfig {
  Settings settings;
  bool has_hierarchy = false;
  OutputSpec output;
  std::vector<HyperBox> hyper_sweep;
  std::optional<OpSweep> op_sweep;
  SyntheticSpec synthetic;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates. `source` names the input in diagnostics.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

/// Fully resolved configuration (defaults filled in); parse_config_text of
/// its dump yields an equal RunConfig.
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const HyperBox& box);
nlohmann::json to_json(const SystemSpec& system);

Rq5Settings rq5_settings(const RunConfig& config);

/// Settings with op_sweep vector `index` applied; validated.
Settings apply_op_sweep(const Settings& base, const OpSweep& sweep, std::size_t index);

/// Every domain's box replaced by `box`; validated.
Settings apply_hyper_box(const Settings& base, const HyperBox& box);

}  // namespace credrel
