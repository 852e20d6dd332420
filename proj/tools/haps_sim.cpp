// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/config.hpp"
#include "haps/output.hpp"
#include "haps/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <optional>

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

std::string default_out_dir() {
  const char* env = std::getenv("HAPS_OUT_DIR");
  return env && *env ? env : "out";
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, const std::string& experiment) {
  haps::ScenarioConfig config = haps::load_config(config_path);
  if (seed) config.seed = *seed;
  if (!experiment.empty()) {
    auto j = haps::to_json(config);
    j["experiment"] = experiment;
    config = haps::parse_config(j.dump());
  }
  haps::prepare_output_dir(out_dir);
  spdlog::info("running {} (seed {}, config {})", haps::to_string(config.experiment.kind),
               config.seed, haps::config_hash(config).substr(0, 12));
  const haps::ScenarioResult result = haps::run_scenario(config);
  haps::RunManifest invocation;
  invocation.config_path = config_path;
  invocation.seed_override = seed;
  invocation.experiment_override = experiment;
  const haps::RunManifest manifest = haps::write_result(out_dir, config, result, invocation);
  for (const auto& f : manifest.files) std::cout << out_dir << "/" << f.name << "\n";
  if (!result.rates.empty())
    std::cout << fmt::format("sum rate: {:.6g} bps over {} users\n", result.sum_rate_bps(),
                             result.rates.size());
  return kOk;
}

int run_geometry(const std::string& config_path, const std::string& out_dir) {
  const haps::ScenarioConfig config = haps::load_config(config_path);
  haps::prepare_output_dir(out_dir);
  const haps::ArrayGeometry geometry = haps::scenario_geometry(config, config.architecture);
  const std::string problem = haps::check_invariants(geometry);
  if (!problem.empty()) throw haps::ScenarioError("geometry invariant violated: " + problem);
  haps::write_atomic(std::filesystem::path(out_dir) / "geometry.csv", haps::geometry_csv(geometry));
  std::cout << out_dir << "/geometry.csv\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HAPS antenna array simulator"};
  app.require_subcommand(1);
  std::string verbosity = "warn";
  app.add_option("--log-level", verbosity, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  std::string config_path;
  std::string out_dir = default_out_dir();
  std::optional<std::uint64_t> seed;
  std::string experiment;

  auto* sim = app.add_subcommand("simulate", "Run the configured experiment and write CSV outputs");
  sim->add_option("config", config_path, "Scenario file (TOML or JSON)")->required();
  sim->add_option("--out", out_dir, "Output directory (default: $HAPS_OUT_DIR or ./out)");
  sim->add_option("--seed", seed, "Override the scenario seed");
  sim->add_option("--experiment", experiment,
                  "Override the experiment (pipeline, heatmap, cdf, sweep_power, sweep_k, sweep_mk, "
                  "beam_footprint)");

  auto* val = app.add_subcommand("validate", "Parse and validate a scenario file");
  val->add_option("config", config_path, "Scenario file (TOML or JSON)")->required();

  auto* geo = app.add_subcommand("geometry", "Write the array element positions");
  geo->add_option("config", config_path, "Scenario file (TOML or JSON)")->required();
  geo->add_option("--out", out_dir, "Output directory (default: $HAPS_OUT_DIR or ./out)");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(verbosity));

  try {
    if (sim->parsed()) return run_simulate(config_path, out_dir, seed, experiment);
    if (geo->parsed()) return run_geometry(config_path, out_dir);
    const haps::ScenarioConfig config = haps::load_config(config_path);
    std::cout << "ok " << haps::config_hash(config) << "\n";
    return kOk;
  } catch (const haps::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const haps::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  }
}
