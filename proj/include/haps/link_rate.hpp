// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#pragma once

#include "haps/channel.hpp"
#include "haps/element_gain.hpp"
#include "haps/selection.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace haps {

struct PowerAllocation {
  Eigen::VectorXd p;  // Watts per user
  double p_haps_w = 0.0;

  /// Empty when p_k > 0 for all k and sum p_k <= P_HAPS (+1e-9 W).
  std::string check() const;
};

struct RateReport {
  Eigen::VectorXd sinr;
  Eigen::VectorXd rate_bps;
  double bandwidth_hz = 0.0;

  double sum_rate_bps() const { return rate_bps.sum(); }
};

/// Per-user amplitude sums T_k = sum over the user's own selection of sqrt(g_km).
Eigen::VectorXd amplitude_sums(const SelectionMatrix& selection, const GainMatrix& gains);

/// Cross power sums S(k, k') = sum over the elements serving k' of g_km.
Eigen::MatrixXd cross_power_sums(const SelectionMatrix& selection, const GainMatrix& gains);

/// The closed-form SINR written as a_k p_k / (sum_k' b_kk' p_k' + sigma^2).
struct LinkCoefficients {
  Eigen::VectorXd signal;     // a_k = beta_k^2 T_k^2 / M_k
  Eigen::MatrixXd coupling;   // b_kk' = beta_k^2 S(k, k') / M_k'
  double sigma_sq = 0.0;

  int size() const { return static_cast<int>(signal.size()); }
};

LinkCoefficients link_coefficients(const SelectionMatrix& selection, const GainMatrix& gains,
                                   const Eigen::VectorXd& beta_sq, double sigma_sq);

Eigen::VectorXd sinr_from_coefficients(const Eigen::VectorXd& p, const LinkCoefficients& coeffs);

/// Closed-form use-and-then-forget SINR of every user. Runs in O(K M)
/// without forming the K x K coupling matrix. Throws on empty selections or
/// mismatched dimensions.
Eigen::VectorXd sinr_closed_form(const Eigen::VectorXd& p, const SelectionMatrix& selection,
                                 const GainMatrix& gains, const Eigen::VectorXd& beta_sq,
                                 double sigma_sq);

/// BW log2(1 + SINR).
double rate(double sinr, double bandwidth_hz);

RateReport rate_report(const Eigen::VectorXd& sinr, double bandwidth_hz);

/// Noise-free, equal-power SINR T_k^2 / sum_k' S(k, k'). Requires all users
/// to have the same number of selected elements.
Eigen::VectorXd sinr_interference_limited(const SelectionMatrix& selection, const GainMatrix& gains);

/// Large-K sum rate with unit element gains: BW M_k log2(e).
double sum_rate_asymptotic(int m_k, double bandwidth_hz);

struct MonteCarloEstimate {
  Eigen::VectorXd sinr;
  Eigen::VectorXd std_error;        // delta-method standard error of sinr
  Eigen::VectorXcd mean_desired;    // sample mean of the desired-signal coefficient
  Eigen::VectorXd received_power;   // sample mean of |interference + noise|^2
};

/// Monte Carlo estimate of the use-and-then-forget SINR from simulated
/// received signals. The desired-signal mean is averaged over Ricean channel
/// draws with matched steering beamformers. The interference-plus-noise power
/// is averaged over draws in which every element's LoS phase is uniformly
/// random (the phase ensemble the bound averages over), with random QPSK
/// symbols for all users and CN(0, sigma^2) noise.
MonteCarloEstimate sinr_monte_carlo(const UserField& users, const ArrayGeometry& geometry,
                                    const std::vector<LinkBudget>& budgets,
                                    const SelectionMatrix& selection, const Eigen::VectorXd& p,
                                    const GainPattern& pattern, const ChannelParams& params,
                                    int n_draws, std::uint64_t seed);

}  // namespace haps
