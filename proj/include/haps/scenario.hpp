// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#pragma once

#include "haps/channel.hpp"
#include "haps/element_gain.hpp"
#include "haps/geometry.hpp"
#include "haps/link_rate.hpp"
#include "haps/power_control.hpp"
#include "haps/selection.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haps {

/// A scenario-level failure; `what()` carries the scenario context.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PlacementKind { Auto, UniformRandom, SquareGrid, Explicit };
enum class ExperimentKind { Pipeline, Heatmap, Cdf, SweepPower, SweepK, SweepMk, BeamFootprint };
enum class PowerMode { MaxMin, FixedPerUser };
enum class CdfMode { Probe, Beams };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(PlacementKind kind);
std::string_view to_string(PowerMode mode);
std::string_view to_string(CdfMode mode);

struct Placement {
  PlacementKind kind = PlacementKind::Auto;
  int count = 0;       // UniformRandom; 0 means "experiment default"
  int grid_n = 100;    // SquareGrid, n x n cell centres
  std::vector<std::pair<double, double>> explicit_xy;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Pipeline;
  std::vector<double> sweep;                // dBm, K or M_k values
  std::vector<Architecture> schemes;        // CDF and sweep comparisons
  CdfMode cdf_mode = CdfMode::Probe;
  std::vector<std::pair<double, double>> beam_centers;
  std::vector<int> beam_m_k;
};

struct ScenarioConfig {
  Architecture architecture = Architecture::Hemispherical;
  ArrayParams array;
  ChannelParams channel;
  double noise_figure_db = 7.0;
  double noise_psd_dbm_hz = -174.0;
  GainPattern pattern;

  int num_users = 16;
  int m_k = 64;
  int m_element_cap = 0;  // 0: K, never binds
  double p_haps_w = 100.0;
  double bandwidth_hz = 20.0e6;
  double area_side_m = 60000.0;
  std::uint64_t seed = 1;

  Placement placement;
  ExperimentSpec experiment;
  PowerMode power_mode = PowerMode::MaxMin;
  double fixed_power_w = 1.0;
  BisectionConfig bisection;

  double sigma_sq() const { return noise_power(bandwidth_hz, noise_figure_db, noise_psd_dbm_hz); }
  /// Channel parameters with the noise power derived from bandwidth and noise figure.
  ChannelParams channel_params() const;
};

struct RateRow {
  std::string scheme;
  int user = 0;
  double x_m = 0.0;
  double y_m = 0.0;
  double sinr = 0.0;
  double se_bps_per_hz = 0.0;
  double rate_bps = 0.0;
  double power_w = 0.0;
};

struct HeatmapRow {
  double x_m = 0.0;
  double y_m = 0.0;
  double se_bps_per_hz = 0.0;
};

struct CdfRow {
  std::string scheme;
  double se_bps_per_hz = 0.0;
  double cdf = 0.0;
};

struct SweepRow {
  std::string scheme;
  std::string parameter;
  double value = 0.0;
  double sum_rate_bps = 0.0;
  double min_sinr = 0.0;
  double total_power_w = 0.0;
};

struct ScenarioResult {
  ExperimentKind experiment = ExperimentKind::Pipeline;
  std::uint64_t seed = 0;
  std::string config_hash;
  double bandwidth_hz = 0.0;
  double p_haps_w = 0.0;

  std::vector<RateRow> rates;
  std::vector<HeatmapRow> heatmap;
  std::vector<CdfRow> cdf;
  std::vector<SweepRow> sweep;
  std::vector<std::pair<int, int>> selection;  // (user, element), 0-based
  std::vector<ConvergenceRow> convergence;
  std::optional<ArrayGeometry> geometry;

  double sum_rate_bps() const;
};

/// Everything the four-step pipeline produces for one user set.
struct PipelineOutcome {
  ArrayGeometry geometry;
  UserField users;
  std::vector<LinkBudget> budgets;
  GainMatrix gains;
  SelectionMatrix selection;
  PowerAllocation allocation;
  Eigen::VectorXd sinr;
  std::optional<MaxMinResult> max_min;
};

/// Builds the array for `arch` from the scenario's shape parameters.
ArrayGeometry scenario_geometry(const ScenarioConfig& config, Architecture arch);

/// Uniform users over the scenario square; deterministic in `seed`.
std::vector<std::pair<double, double>> uniform_positions(double area_side_m, int count,
                                                          std::uint64_t seed);

/// n x n cell centres covering the scenario square.
std::vector<std::pair<double, double>> grid_positions(double area_side_m, int n);

/// Square grid of K beam centres (ceil(sqrt K) per side, row-major, first K).
std::vector<std::pair<double, double>> beam_center_grid(double area_side_m, int k);

/// Steering beamforming, closed-form SINR, greedy selection, then power
/// allocation (bisection or fixed per user).
PipelineOutcome solve(const ScenarioConfig& config, const ArrayGeometry& geometry,
                      const UserField& users, int m_k, double p_haps_w);

/// Spectral efficiency of a single probe user served alone by its m_k best
/// elements at `power_w`.
double probe_spectral_efficiency(const ScenarioConfig& config, const ArrayGeometry& geometry,
                                 const GroundUser& user, double power_w);

ScenarioResult run_pipeline(const ScenarioConfig& config);
ScenarioResult run_heatmap(const ScenarioConfig& config);
ScenarioResult run_cdf(const ScenarioConfig& config);
ScenarioResult run_sweep(const ScenarioConfig& config);
ScenarioResult run_beam_footprint(const ScenarioConfig& config);

/// Dispatches on config.experiment.kind.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Coefficient of variation (std / mean) of heatmap spectral efficiencies.
double coefficient_of_variation(const std::vector<HeatmapRow>& rows);

/// Median spectral efficiency of one scheme's CDF rows.
double cdf_median(const std::vector<CdfRow>& rows, std::string_view scheme);

}  // namespace haps
