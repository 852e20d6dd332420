// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#pragma once

#include "haps/scenario.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace haps {

/// Output directory or file write failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputFile {
  std::string name;
  std::string sha256;
  std::size_t rows = 0;
};

struct RunManifest {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed_override;
  std::string experiment_override;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string experiment;
  std::string version;
  std::vector<OutputFile> files;
};

inline constexpr const char* kVersion = "0.1.0";

/// Creates `dir` if needed and checks that it is a writable directory.
/// Throws IoError before any computation starts.
void prepare_output_dir(const std::filesystem::path& dir);

/// Writes `contents` to `path` through a temporary file and a rename, so a
/// reader never sees a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

// CSV renderers. Numbers use 9 significant digits; every file has a header row.
std::string heatmap_csv(const std::vector<HeatmapRow>& rows);
std::string cdf_csv(const std::vector<CdfRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string rates_csv(const std::vector<RateRow>& rows);
std::string selection_csv(const std::vector<std::pair<int, int>>& pairs);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
std::string geometry_csv(const ArrayGeometry& geometry);

/// Writes every non-empty table of `result`, config.json and manifest.json.
/// The invocation fields of `manifest` (config path, overrides) are copied
/// into manifest.json; the rest is filled in here.
RunManifest write_result(const std::filesystem::path& dir, const ScenarioConfig& config,
                         const ScenarioResult& result, RunManifest manifest = {});

}  // namespace haps
