// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#pragma once

#include "haps/geometry.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace haps {

using cd = std::complex<double>;

enum class PlosFormula {
  Standard,      // 1 / (1 + A exp(-B (E - A))), E = elevation in degrees
  ZenithOffset,  // 1 / (1 + A exp(-B (90 - E) - A)), kept for comparison only
};

struct ChannelParams {
  double carrier_hz = 2.0e9;
  double eta_los_db = 1.0;
  double eta_nlos_db = 20.0;
  double env_a = 9.61;
  double env_b = 0.16;
  double noise_power_w = 3.98107e-13;
  PlosFormula plos_formula = PlosFormula::Standard;

  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
  /// Channel gain at the 1 m reference distance, (4 pi f / c)^-2.
  double beta0() const;
  void validate() const;
};

struct LinkBudget {
  double fspl_db = 0.0;
  double p_los = 1.0;
  double pl_db = 0.0;
  double beta_sq = 0.0;
  double eta_k = 1.0;  // linear excessive loss factor

  double p_nlos() const { return 1.0 - p_los; }
};

double fspl_db(double distance_m, double carrier_hz);

double p_los(double elevation_deg, const ChannelParams& params);

LinkBudget link_budget(const GroundUser& user, const ChannelParams& params);

std::vector<LinkBudget> link_budgets(const UserField& users, const ChannelParams& params);

/// Unit-modulus LoS phasor exp(j 2 pi d / lambda).
cd steering_phasor(double distance_m, double wavelength_m);

/// Steering vector of one user over every element of the array.
std::vector<cd> steering_vector(const GroundUser& user, const ArrayGeometry& geometry,
                                double wavelength_m);

/// One Ricean realisation h_k (length M) per the LoS/NLoS mixture of `budget`.
std::vector<cd> sample_channel(const GroundUser& user, const ArrayGeometry& geometry,
                               const LinkBudget& budget, const ChannelParams& params,
                               std::uint64_t seed);

/// Thermal noise power in Watts for a given bandwidth and receiver noise
/// figure, from a -174 dBm/Hz density.
double noise_power(double bandwidth_hz, double noise_figure_db, double density_dbm_hz = -174.0);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

}  // namespace haps
