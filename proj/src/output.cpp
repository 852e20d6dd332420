// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/output.hpp"

#include "haps/config.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <system_error>

namespace haps {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return fmt::format("{:.9g}", v); }

std::string join(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) {
    if (!line.empty()) line += ',';
    line += c;
  }
  line += '\n';
  return line;
}

}  // namespace

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  const fs::path probe = dir / ".haps_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

void write_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

std::string heatmap_csv(const std::vector<HeatmapRow>& rows) {
  std::string s = "x_m,y_m,se_bps_per_hz\n";
  for (const auto& r : rows) s += join({num(r.x_m), num(r.y_m), num(r.se_bps_per_hz)});
  return s;
}

std::string cdf_csv(const std::vector<CdfRow>& rows) {
  std::string s = "scheme,se_bps_per_hz,cdf\n";
  for (const auto& r : rows) s += join({r.scheme, num(r.se_bps_per_hz), num(r.cdf)});
  return s;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string s = "scheme,parameter,value,sum_rate_bps,min_sinr,total_power_w\n";
  for (const auto& r : rows)
    s += join({r.scheme, r.parameter, num(r.value), num(r.sum_rate_bps), num(r.min_sinr),
               num(r.total_power_w)});
  return s;
}

std::string rates_csv(const std::vector<RateRow>& rows) {
  std::string s = "scheme,user,x_m,y_m,sinr_db,se_bps_per_hz,rate_bps,power_w\n";
  for (const auto& r : rows)
    s += join({r.scheme, std::to_string(r.user), num(r.x_m), num(r.y_m), num(linear_to_db(r.sinr)),
               num(r.se_bps_per_hz), num(r.rate_bps), num(r.power_w)});
  return s;
}

std::string selection_csv(const std::vector<std::pair<int, int>>& pairs) {
  std::string s = "user,element\n";
  for (const auto& [k, m] : pairs) s += join({std::to_string(k), std::to_string(m)});
  return s;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string s = "iteration,eta_min,eta_max,eta,feasible\n";
  for (const auto& r : rows)
    s += join({std::to_string(r.iteration), num(r.eta_min), num(r.eta_max), num(r.eta),
               r.feasible ? "1" : "0"});
  return s;
}

std::string geometry_csv(const ArrayGeometry& geometry) {
  std::string s = "index,x,y,z,bx,by,bz,d_m,theta_m,phi_m\n";
  for (std::size_t i = 0; i < geometry.elements.size(); ++i) {
    const auto& e = geometry.elements[i];
    s += join({std::to_string(i), num(e.position.x()), num(e.position.y()), num(e.position.z()),
               num(e.boresight.x()), num(e.boresight.y()), num(e.boresight.z()), num(e.polar.d_m),
               num(e.polar.theta_deg), num(e.polar.phi_deg)});
  }
  return s;
}

RunManifest write_result(const fs::path& dir, const ScenarioConfig& config,
                         const ScenarioResult& result, RunManifest manifest) {
  prepare_output_dir(dir);
  manifest.output_dir = dir.string();
  manifest.config_hash = result.config_hash;
  manifest.seed = result.seed;
  manifest.experiment = std::string(to_string(result.experiment));
  manifest.version = kVersion;

  auto emit = [&](const std::string& name, const std::string& contents, std::size_t rows) {
    write_atomic(dir / name, contents);
    manifest.files.push_back({name, sha256_hex(contents), rows});
  };
  if (!result.rates.empty()) emit("rates.csv", rates_csv(result.rates), result.rates.size());
  if (!result.heatmap.empty()) emit("heatmap.csv", heatmap_csv(result.heatmap), result.heatmap.size());
  if (!result.cdf.empty()) emit("cdf.csv", cdf_csv(result.cdf), result.cdf.size());
  if (!result.sweep.empty()) emit("sweep.csv", sweep_csv(result.sweep), result.sweep.size());
  if (!result.selection.empty())
    emit("selection.csv", selection_csv(result.selection), result.selection.size());
  if (!result.convergence.empty())
    emit("convergence.csv", convergence_csv(result.convergence), result.convergence.size());
  if (result.geometry)
    emit("geometry.csv", geometry_csv(*result.geometry), result.geometry->elements.size());
  emit("config.json", to_json(config).dump(2) + "\n", 0);

  nlohmann::json m;
  m["config_path"] = manifest.config_path;
  m["output_dir"] = manifest.output_dir;
  m["seed_override"] = manifest.seed_override ? nlohmann::json(*manifest.seed_override) : nlohmann::json(nullptr);
  m["experiment_override"] = manifest.experiment_override.empty()
                                 ? nlohmann::json(nullptr)
                                 : nlohmann::json(manifest.experiment_override);
  m["config_hash"] = manifest.config_hash;
  m["seed"] = manifest.seed;
  m["experiment"] = manifest.experiment;
  m["version"] = manifest.version;
  m["files"] = nlohmann::json::array();
  for (const auto& f : manifest.files)
    m["files"].push_back({{"name", f.name}, {"sha256", f.sha256}, {"rows", f.rows}});
  write_atomic(dir / "manifest.json", m.dump(2) + "\n");
  return manifest;
}

}  // namespace haps
