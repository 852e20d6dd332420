// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#pragma once

#include "haps/link_rate.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace haps {

struct BisectionConfig {
  double eta_min = 0.0;
  double eta_max = 1500.0;
  double epsilon = 0.01;
  /// eta_max is doubled at most this many times when it turns out feasible.
  int max_expansions = 20;

  void validate() const;
};

struct FeasibilityResult {
  bool feasible = false;
  /// Minimal-power equal-SINR point; present when feasible.
  std::optional<Eigen::VectorXd> witness;
  /// Set when the equal-SINR system was singular or its solve residual was
  /// above 1e-6 relative; such targets are reported infeasible.
  bool ill_conditioned = false;
  double residual = 0.0;
};

/// Decides whether powers p > 0 with sum p <= p_haps reach SINR >= eta for
/// every user, by solving (a_k - eta b_kk) p_k - eta sum_{k'!=k} b_kk' p_k' = eta sigma^2.
FeasibilityResult feasibility(double eta, const LinkCoefficients& coeffs, double p_haps_w);

struct ConvergenceRow {
  int iteration = 0;
  double eta_min = 0.0;
  double eta_max = 0.0;
  double eta = 0.0;
  bool feasible = false;
};

struct MaxMinResult {
  PowerAllocation allocation;
  /// Minimum closed-form SINR at the returned allocation.
  double achieved_eta = 0.0;
  /// Final bracket.
  double eta_lo = 0.0;
  double eta_hi = 0.0;
  int iterations = 0;
  int expansions = 0;
  std::vector<ConvergenceRow> trace;
};

/// Bisection over the common SINR target. The last feasible witness is
/// scaled up uniformly until the budget is exhausted, which cannot lower any
/// user's SINR. Requires sigma^2 > 0.
MaxMinResult max_min_power(const LinkCoefficients& coeffs, double p_haps_w,
                           const BisectionConfig& config = {});

MaxMinResult max_min_power(const SelectionMatrix& selection, const GainMatrix& gains,
                           const Eigen::VectorXd& beta_sq, double sigma_sq, double p_haps_w,
                           const BisectionConfig& config = {});

}  // namespace haps
