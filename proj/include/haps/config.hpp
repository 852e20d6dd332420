// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#pragma once

#include "haps/scenario.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace haps {

/// Invalid or unknown configuration input. `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parses a scenario document. JSON objects (first non-blank character '{')
/// and a TOML subset (key = value lines, [section] headers, strings, numbers,
/// booleans and possibly nested arrays) are both accepted. Sections only
/// group keys; every key lives in one flat namespace. Omitted keys take the
/// reference defaults. Throws ConfigError on unknown keys, type mismatches
/// or invariant violations.
ScenarioConfig parse_config(std::string_view text);

ScenarioConfig load_config(const std::filesystem::path& path);

/// Flat JSON document holding every key; parse_config(to_json(c).dump())
/// reproduces `c`.
nlohmann::json to_json(const ScenarioConfig& config);

/// Validates all invariants of a config built in code. Throws ConfigError.
void validate(const ScenarioConfig& config);

/// SHA-256 (hex) of the canonical JSON serialisation.
std::string config_hash(const ScenarioConfig& config);

std::string sha256_hex(std::string_view data);

/// Parses the TOML subset into a JSON object (sections become nested objects).
nlohmann::json parse_toml_subset(std::string_view text);

}  // namespace haps
