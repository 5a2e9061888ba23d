#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pplab/harness/experiment.hpp"

namespace pplab::io {

// Environment settings applied to the conditions a selector matches. The
// selector is a pairing id ("iql-cql"), a regime id ("pred-fast"), or both
// joined by '/'.
struct ConditionOverride {
  std::optional<harness::Pairing> pairing;
  std::optional<harness::SpeedRegime> regime;
  // key -> YAML scalar text, in document order
  std::vector<std::pair<std::string, std::string>> settings;

  bool matches(const harness::Condition& c) const noexcept;
  std::string selector() const;

  friend bool operator==(const ConditionOverride&, const ConditionOverride&) = default;
};

// The declarative experiment document. Every field defaults to the reference
// parameter table, so an empty document reproduces the reference setup.
struct ExperimentFile {
  harness::RunPlan plan;
  std::string output_dir = "results";
  int curve_stride = 100;
  int curve_window = 500;
  unsigned workers = 0;
  std::vector<ConditionOverride> overrides;

  // Plan with every matching override applied, in document order.
  harness::RunPlan plan_for(const harness::Condition& condition) const;

  friend bool operator==(const ExperimentFile&, const ExperimentFile&) = default;
};

// Parses a flat YAML mapping. Unknown keys, malformed values and violated
// invariants raise ConfigError naming the key.
ExperimentFile parse_config(std::string_view text);
ExperimentFile load_config(const std::string& path);

// Canonical document: every key, fixed order, full precision.
std::string serialize(const ExperimentFile& file);

// Hex SHA-256 of serialize(file).
std::string config_digest(const ExperimentFile& file);

}  // namespace pplab::io
