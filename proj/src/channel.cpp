// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace haps {

double ChannelParams::beta0() const {
  const double k = 4.0 * kPi * carrier_hz / kSpeedOfLight;
  return 1.0 / (k * k);
}

void ChannelParams::validate() const {
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("carrier_hz must be positive");
  if (!(eta_los_db >= 0.0)) throw std::invalid_argument("eta_los_db must be non-negative");
  if (!(eta_nlos_db >= eta_los_db))
    throw std::invalid_argument("eta_nlos_db must be at least eta_los_db");
  if (!(noise_power_w > 0.0)) throw std::invalid_argument("noise power must be positive");
}

double fspl_db(double distance_m, double carrier_hz) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("fspl_db: distance must be positive");
  return 20.0 * std::log10(4.0 * kPi * carrier_hz * distance_m / kSpeedOfLight);
}

double p_los(double elevation_deg, const ChannelParams& params) {
  const double a = params.env_a;
  const double b = params.env_b;
  const double exponent = params.plos_formula == PlosFormula::Standard
                              ? -b * (elevation_deg - a)
                              : -b * (90.0 - elevation_deg) - a;
  return 1.0 / (1.0 + a * std::exp(exponent));
}

LinkBudget link_budget(const GroundUser& user, const ChannelParams& params) {
  LinkBudget lb;
  lb.fspl_db = fspl_db(user.d_m, params.carrier_hz);
  lb.p_los = p_los(user.elevation_deg, params);
  const double excess_db = lb.p_los * params.eta_los_db + lb.p_nlos() * params.eta_nlos_db;
  lb.pl_db = lb.fspl_db + excess_db;
  lb.beta_sq = std::pow(10.0, -lb.pl_db / 10.0);
  lb.eta_k = std::pow(10.0, -excess_db / 10.0);
  return lb;
}

std::vector<LinkBudget> link_budgets(const UserField& users, const ChannelParams& params) {
  std::vector<LinkBudget> out;
  out.reserve(users.size());
  for (const auto& u : users.users) out.push_back(link_budget(u, params));
  return out;
}

cd steering_phasor(double distance_m, double wavelength_m) {
  // Reduce the cycle count first; d / lambda is ~1e5 and the phase needs
  // sub-milliradian fidelity.
  const double cycles = distance_m / wavelength_m;
  const double frac = cycles - std::floor(cycles);
  return std::polar(1.0, 2.0 * kPi * frac);
}

std::vector<cd> steering_vector(const GroundUser& user, const ArrayGeometry& geometry,
                                double wavelength_m) {
  std::vector<cd> b;
  b.reserve(geometry.size());
  for (const auto& e : geometry.elements)
    b.push_back(steering_phasor(distance_element_user(e, user), wavelength_m));
  return b;
}

std::vector<cd> sample_channel(const GroundUser& user, const ArrayGeometry& geometry,
                               const LinkBudget& budget, const ChannelParams& params,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double amplitude = std::pow(10.0, -budget.pl_db / 20.0);
  const double los = std::sqrt(budget.p_los);
  const double nlos = std::sqrt(budget.p_nlos());
  const double lambda = params.wavelength_m();

  std::vector<cd> h;
  h.reserve(geometry.size());
  for (const auto& e : geometry.elements) {
    const cd b = steering_phasor(distance_element_user(e, user), lambda);
    const double re = normal(rng);
    const double im = normal(rng);
    h.push_back(amplitude * (los * b + nlos * cd(re, im)));
  }
  return h;
}

double noise_power(double bandwidth_hz, double noise_figure_db, double density_dbm_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  const double dbm = density_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return dbm_to_watt(dbm);
}

}  // namespace haps
