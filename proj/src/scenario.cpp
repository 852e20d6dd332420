// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/scenario.hpp"

#include "haps/config.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace haps {

namespace {

std::string scheme_label(Architecture arch) {
  switch (arch) {
    case Architecture::Hemispherical: return "HAA";
    case Architecture::Cylindrical: return "CAA";
    case Architecture::Rectangular: return "RAA";
    case Architecture::Hybrid: return "HRCAA";
  }
  return "?";
}

std::vector<Architecture> schemes_or_default(const ScenarioConfig& config,
                                             std::vector<Architecture> fallback) {
  return config.experiment.schemes.empty() ? std::move(fallback) : config.experiment.schemes;
}

std::vector<std::pair<double, double>> probe_positions(const ScenarioConfig& config,
                                                       PlacementKind fallback, int default_count) {
  const auto& pl = config.placement;
  const PlacementKind kind = pl.kind == PlacementKind::Auto ? fallback : pl.kind;
  switch (kind) {
    case PlacementKind::SquareGrid: return grid_positions(config.area_side_m, pl.grid_n);
    case PlacementKind::Explicit: return pl.explicit_xy;
    case PlacementKind::UniformRandom:
    case PlacementKind::Auto:
      return uniform_positions(config.area_side_m, pl.count > 0 ? pl.count : default_count,
                               config.seed);
  }
  return {};
}

ScenarioResult make_result(const ScenarioConfig& config) {
  ScenarioResult r;
  r.experiment = config.experiment.kind;
  r.seed = config.seed;
  r.config_hash = config_hash(config);
  r.bandwidth_hz = config.bandwidth_hz;
  r.p_haps_w = config.p_haps_w;
  return r;
}

template <typename F>
auto with_context(const std::string& context, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(context + ": " + e.what());
  }
}

double spectral_efficiency(double sinr) { return std::log2(1.0 + sinr); }

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Pipeline: return "pipeline";
    case ExperimentKind::Heatmap: return "heatmap";
    case ExperimentKind::Cdf: return "cdf";
    case ExperimentKind::SweepPower: return "sweep_power";
    case ExperimentKind::SweepK: return "sweep_k";
    case ExperimentKind::SweepMk: return "sweep_mk";
    case ExperimentKind::BeamFootprint: return "beam_footprint";
  }
  return "unknown";
}

std::string_view to_string(PlacementKind kind) {
  switch (kind) {
    case PlacementKind::Auto: return "auto";
    case PlacementKind::UniformRandom: return "uniform";
    case PlacementKind::SquareGrid: return "grid";
    case PlacementKind::Explicit: return "explicit";
  }
  return "unknown";
}

std::string_view to_string(PowerMode mode) {
  return mode == PowerMode::MaxMin ? "maxmin" : "fixed";
}

std::string_view to_string(CdfMode mode) { return mode == CdfMode::Probe ? "probe" : "beams"; }

ChannelParams ScenarioConfig::channel_params() const {
  ChannelParams p = channel;
  p.noise_power_w = sigma_sq();
  return p;
}

double ScenarioResult::sum_rate_bps() const {
  double s = 0.0;
  for (const auto& r : rates) s += r.rate_bps;
  return s;
}

ArrayGeometry scenario_geometry(const ScenarioConfig& config, Architecture arch) {
  return build_array(arch, config.array);
}

std::vector<std::pair<double, double>> uniform_positions(double area_side_m, int count,
                                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-area_side_m / 2.0, area_side_m / 2.0);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double x = coord(rng);
    const double y = coord(rng);
    out.emplace_back(x, y);
  }
  return out;
}

std::vector<std::pair<double, double>> grid_positions(double area_side_m, int n) {
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  const double cell = area_side_m / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.emplace_back(-area_side_m / 2.0 + (j + 0.5) * cell, -area_side_m / 2.0 + (i + 0.5) * cell);
  return out;
}

std::vector<std::pair<double, double>> beam_center_grid(double area_side_m, int k) {
  const int n = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
  auto grid = grid_positions(area_side_m, n);
  grid.resize(static_cast<std::size_t>(k));
  return grid;
}

PipelineOutcome solve(const ScenarioConfig& config, const ArrayGeometry& geometry,
                      const UserField& users, int m_k, double p_haps_w) {
  PipelineOutcome out;
  out.geometry = geometry;
  out.users = users;
  const ChannelParams channel = config.channel_params();
  const int K = static_cast<int>(users.size());

  // Step 1-2: matched steering beamformers are implicit in the closed form,
  // which only needs the large-scale gains and element gains.
  out.budgets = link_budgets(users, channel);
  out.gains = gain_matrix(geometry, users, config.pattern);
  Eigen::VectorXd beta_sq(K);
  for (int k = 0; k < K; ++k) beta_sq[k] = out.budgets[static_cast<std::size_t>(k)].beta_sq;

  // Step 3: gain-greedy selection.
  const GreedyReport greedy = select_greedy_report(out.gains, m_k, config.m_element_cap);
  out.selection = greedy.selection;
  for (int k : greedy.padded_users)
    spdlog::warn("user {}: fewer than {} forward-facing elements, padded with zero-gain elements", k,
                 m_k);

  // Step 4: power allocation.
  if (config.power_mode == PowerMode::MaxMin) {
    out.max_min = max_min_power(out.selection, out.gains, beta_sq, channel.noise_power_w, p_haps_w,
                                config.bisection);
    out.allocation = out.max_min->allocation;
  } else {
    out.allocation.p = Eigen::VectorXd::Constant(K, config.fixed_power_w);
    out.allocation.p_haps_w = p_haps_w;
    if (const auto err = out.allocation.check(); !err.empty())
      throw ScenarioError("fixed per-user power: " + err);
  }
  out.sinr = sinr_closed_form(out.allocation.p, out.selection, out.gains, beta_sq,
                              channel.noise_power_w);
  return out;
}

double probe_spectral_efficiency(const ScenarioConfig& config, const ArrayGeometry& geometry,
                                 const GroundUser& user, double power_w) {
  const ChannelParams channel = config.channel_params();
  const LinkBudget lb = link_budget(user, channel);
  GainMatrix g = gain_row(geometry, user, config.pattern).transpose();
  const SelectionMatrix sel = select_greedy(g, config.m_k);
  const Eigen::VectorXd sinr = sinr_closed_form(Eigen::VectorXd::Constant(1, power_w), sel, g,
                                                Eigen::VectorXd::Constant(1, lb.beta_sq),
                                                channel.noise_power_w);
  return spectral_efficiency(sinr[0]);
}

ScenarioResult run_pipeline(const ScenarioConfig& config) {
  return with_context("pipeline", [&] {
    ScenarioResult result = make_result(config);
    const ArrayGeometry geometry = scenario_geometry(config, config.architecture);
    const UserField users = make_user_field(
        probe_positions(config, PlacementKind::UniformRandom, config.num_users), config.array.altitude_m);
    if (users.size() == 0) throw ScenarioError("pipeline: no users placed");
    const PipelineOutcome out = solve(config, geometry, users, config.m_k, config.p_haps_w);

    const std::string label = scheme_label(config.architecture);
    for (int k = 0; k < static_cast<int>(users.size()); ++k) {
      const auto& u = users.users[static_cast<std::size_t>(k)];
      RateRow row;
      row.scheme = label;
      row.user = k;
      row.x_m = u.x_m;
      row.y_m = u.y_m;
      row.sinr = out.sinr[k];
      row.se_bps_per_hz = spectral_efficiency(out.sinr[k]);
      row.rate_bps = rate(out.sinr[k], config.bandwidth_hz);
      row.power_w = out.allocation.p[k];
      result.rates.push_back(row);
      for (int m : out.selection.selected[static_cast<std::size_t>(k)]) result.selection.emplace_back(k, m);
    }
    if (out.max_min) result.convergence = out.max_min->trace;
    result.geometry = geometry;
    return result;
  });
}

ScenarioResult run_heatmap(const ScenarioConfig& config) {
  return with_context("heatmap", [&] {
    ScenarioResult result = make_result(config);
    const ArrayGeometry geometry = scenario_geometry(config, config.architecture);
    for (const auto& [x, y] : probe_positions(config, PlacementKind::SquareGrid, 10000)) {
      const GroundUser u = make_user(x, y, config.array.altitude_m);
      result.heatmap.push_back({x, y, probe_spectral_efficiency(config, geometry, u, config.fixed_power_w)});
    }
    result.geometry = geometry;
    return result;
  });
}

ScenarioResult run_cdf(const ScenarioConfig& config) {
  return with_context("cdf", [&] {
    ScenarioResult result = make_result(config);
    const auto schemes = schemes_or_default(
        config, {Architecture::Hemispherical, Architecture::Cylindrical, Architecture::Rectangular,
                 Architecture::Hybrid});
    const bool beams = config.experiment.cdf_mode == CdfMode::Beams;
    const auto probes = probe_positions(config, PlacementKind::UniformRandom, beams ? 5000 : 10000);
    const ChannelParams channel = config.channel_params();

    for (Architecture arch : schemes) {
      const ArrayGeometry geometry = scenario_geometry(config, arch);
      std::vector<double> se;
      se.reserve(probes.size());
      if (!beams) {
        for (const auto& [x, y] : probes)
          se.push_back(probe_spectral_efficiency(config, geometry,
                                                 make_user(x, y, config.array.altitude_m),
                                                 config.fixed_power_w));
      } else {
        const auto centers = beam_center_grid(config.area_side_m, config.num_users);
        const UserField beam_users = make_user_field(centers, config.array.altitude_m);
        const PipelineOutcome out = solve(config, geometry, beam_users, config.m_k, config.p_haps_w);
        const int K = static_cast<int>(centers.size());
        Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(geometry.size()));
        for (int b = 0; b < K; ++b) {
          const double share = out.allocation.p[b] / out.selection.m_k(b);
          for (int m : out.selection.selected[static_cast<std::size_t>(b)]) load[m] += share;
        }
        for (const auto& [x, y] : probes) {
          int nearest = 0;
          double best = std::numeric_limits<double>::infinity();
          for (int b = 0; b < K; ++b) {
            const double d = std::hypot(x - centers[static_cast<std::size_t>(b)].first,
                                        y - centers[static_cast<std::size_t>(b)].second);
            if (d < best) {
              best = d;
              nearest = b;
            }
          }
          const GroundUser u = make_user(x, y, config.array.altitude_m);
          const double beta_sq = link_budget(u, channel).beta_sq;
          const Eigen::VectorXd g = gain_row(geometry, u, config.pattern);
          double t = 0.0;
          for (int m : out.selection.selected[static_cast<std::size_t>(nearest)]) t += std::sqrt(g[m]);
          const double num = out.allocation.p[nearest] * beta_sq * t * t / out.selection.m_k(nearest);
          const double den = beta_sq * g.dot(load) + channel.noise_power_w;
          se.push_back(spectral_efficiency(num / den));
        }
      }
      std::sort(se.begin(), se.end());
      const double n = static_cast<double>(se.size());
      for (std::size_t i = 0; i < se.size(); ++i)
        result.cdf.push_back({scheme_label(arch), se[i], (static_cast<double>(i) + 1.0) / n});
    }
    return result;
  });
}

ScenarioResult run_sweep(const ScenarioConfig& config) {
  return with_context("sweep", [&] {
    ScenarioResult result = make_result(config);
    const auto schemes = schemes_or_default(config, {config.architecture});
    const auto kind = config.experiment.kind;
    const std::string parameter = kind == ExperimentKind::SweepPower ? "p_haps_dbm"
                                  : kind == ExperimentKind::SweepK   ? "num_users"
                                                                     : "m_k";
    for (Architecture arch : schemes) {
      const ArrayGeometry geometry = scenario_geometry(config, arch);
      for (double value : config.experiment.sweep) {
        int K = config.num_users;
        int m_k = config.m_k;
        double budget = config.p_haps_w;
        if (kind == ExperimentKind::SweepPower) budget = dbm_to_watt(value);
        if (kind == ExperimentKind::SweepK) K = static_cast<int>(value);
        if (kind == ExperimentKind::SweepMk) m_k = static_cast<int>(value);
        const UserField users = make_user_field(
            config.placement.kind == PlacementKind::Explicit
                ? config.placement.explicit_xy
                : uniform_positions(config.area_side_m, K, config.seed),
            config.array.altitude_m);
        const PipelineOutcome out = with_context(
            parameter + "=" + std::to_string(value) + " (" + std::string(to_string(arch)) + ")",
            [&] { return solve(config, geometry, users, m_k, budget); });
        SweepRow row;
        row.scheme = scheme_label(arch);
        row.parameter = parameter;
        row.value = value;
        row.sum_rate_bps = rate_report(out.sinr, config.bandwidth_hz).sum_rate_bps();
        row.min_sinr = out.sinr.minCoeff();
        row.total_power_w = out.allocation.p.sum();
        result.sweep.push_back(row);
      }
    }
    return result;
  });
}

ScenarioResult run_beam_footprint(const ScenarioConfig& config) {
  return with_context("beam_footprint", [&] {
    ScenarioResult result = make_result(config);
    const ArrayGeometry geometry = scenario_geometry(config, config.architecture);
    const ChannelParams channel = config.channel_params();
    const double lambda = channel.wavelength_m();

    auto centers = config.experiment.beam_centers;
    if (centers.empty()) centers = {{0.0, 0.0}, {15000.0, 0.0}, {0.0, 15000.0}, {-15000.0, 0.0}, {0.0, -15000.0}};
    std::vector<int> sizes = config.experiment.beam_m_k;
    if (sizes.empty()) sizes = {16, 32, 64, 128, 256};
    if (sizes.size() != centers.size()) sizes.resize(centers.size(), config.m_k);

    // Per-beam selection and matched weights toward the beam centre.
    struct Beam {
      std::vector<int> elements;
      std::vector<cd> weights;
    };
    std::vector<Beam> beams;
    for (std::size_t b = 0; b < centers.size(); ++b) {
      const GroundUser c = make_user(centers[b].first, centers[b].second, config.array.altitude_m);
      const GainMatrix g = gain_row(geometry, c, config.pattern).transpose();
      Beam beam;
      beam.elements = select_greedy(g, sizes[b]).selected[0];
      const double norm = 1.0 / std::sqrt(static_cast<double>(beam.elements.size()));
      for (int m : beam.elements)
        beam.weights.push_back(
            std::conj(steering_phasor(distance_element_user(geometry.elements[static_cast<std::size_t>(m)], c), lambda)) *
            norm);
      beams.push_back(std::move(beam));
      for (int m : beams.back().elements) result.selection.emplace_back(static_cast<int>(b), m);
    }

    for (const auto& [x, y] : probe_positions(config, PlacementKind::SquareGrid, 10000)) {
      const GroundUser u = make_user(x, y, config.array.altitude_m);
      const double beta_sq = link_budget(u, channel).beta_sq;
      std::vector<double> power(beams.size());
      double total = 0.0;
      for (std::size_t b = 0; b < beams.size(); ++b) {
        cd response = 0.0;
        for (std::size_t i = 0; i < beams[b].elements.size(); ++i) {
          const auto& e = geometry.elements[static_cast<std::size_t>(beams[b].elements[i])];
          const double g = element_gain_linear(angle_element_user(e, u), config.pattern);
          if (g == 0.0) continue;
          response += std::sqrt(g) * steering_phasor(distance_element_user(e, u), lambda) * beams[b].weights[i];
        }
        power[b] = config.fixed_power_w * beta_sq * std::norm(response);
        total += power[b];
      }
      double best = 0.0;
      for (double pb : power)
        best = std::max(best, spectral_efficiency(pb / (total - pb + channel.noise_power_w)));
      result.heatmap.push_back({x, y, best});
    }
    result.geometry = geometry;
    return result;
  });
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  switch (config.experiment.kind) {
    case ExperimentKind::Pipeline: return run_pipeline(config);
    case ExperimentKind::Heatmap: return run_heatmap(config);
    case ExperimentKind::Cdf: return run_cdf(config);
    case ExperimentKind::SweepPower:
    case ExperimentKind::SweepK:
    case ExperimentKind::SweepMk: return run_sweep(config);
    case ExperimentKind::BeamFootprint: return run_beam_footprint(config);
  }
  throw ScenarioError("unknown experiment");
}

double coefficient_of_variation(const std::vector<HeatmapRow>& rows) {
  if (rows.empty()) return 0.0;
  double mean = 0.0;
  for (const auto& r : rows) mean += r.se_bps_per_hz;
  mean /= static_cast<double>(rows.size());
  double var = 0.0;
  for (const auto& r : rows) var += (r.se_bps_per_hz - mean) * (r.se_bps_per_hz - mean);
  var /= static_cast<double>(rows.size());
  return std::sqrt(var) / mean;
}

double cdf_median(const std::vector<CdfRow>& rows, std::string_view scheme) {
  std::vector<double> se;
  for (const auto& r : rows)
    if (r.scheme == scheme) se.push_back(r.se_bps_per_hz);
  if (se.empty()) return 0.0;
  std::sort(se.begin(), se.end());
  const std::size_t n = se.size();
  return n % 2 == 1 ? se[n / 2] : 0.5 * (se[n / 2 - 1] + se[n / 2]);
}

}  // namespace haps
