// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/power_control.hpp"

#include <Eigen/LU>
#include <spdlog/spdlog.h>

#include <cmath>
#include <stdexcept>

namespace haps {

void BisectionConfig::validate() const {
  if (!(eta_min >= 0.0 && eta_min < eta_max))
    throw std::invalid_argument("bisection bracket must satisfy 0 <= eta_min < eta_max");
  if (!(epsilon > 0.0)) throw std::invalid_argument("bisection epsilon must be positive");
}

FeasibilityResult feasibility(double eta, const LinkCoefficients& coeffs, double p_haps_w) {
  if (!(eta > 0.0)) throw std::invalid_argument("feasibility: eta must be positive");
  const int K = coeffs.size();
  Eigen::MatrixXd system = -eta * coeffs.coupling;
  system.diagonal() += coeffs.signal;
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(K, eta * coeffs.sigma_sq);

  FeasibilityResult out;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  if (!(lu.rcond() > 1e-14)) {
    out.ill_conditioned = true;
    return out;
  }
  const Eigen::VectorXd p = lu.solve(rhs);
  out.residual = (system * p - rhs).norm() / rhs.norm();
  if (!p.allFinite() || out.residual > 1e-6) {
    out.ill_conditioned = true;
    return out;
  }
  if ((p.array() > 0.0).all() && p.sum() <= p_haps_w * (1.0 + 1e-12)) {
    out.feasible = true;
    out.witness = p;
  }
  return out;
}

MaxMinResult max_min_power(const LinkCoefficients& coeffs, double p_haps_w,
                           const BisectionConfig& config) {
  config.validate();
  if (!(p_haps_w > 0.0)) throw std::invalid_argument("max_min_power: budget must be positive");
  if (!(coeffs.sigma_sq > 0.0)) throw std::invalid_argument("max_min_power: noise power must be positive");
  const int K = coeffs.size();
  if (K == 0) throw std::invalid_argument("max_min_power: no users");

  MaxMinResult result;
  double lo = config.eta_min;
  double hi = config.eta_max;
  std::optional<Eigen::VectorXd> best;

  while (result.expansions < config.max_expansions) {
    auto probe = feasibility(hi, coeffs, p_haps_w);
    if (!probe.feasible) break;
    spdlog::info("eta_max = {} is feasible, doubling the bracket", hi);
    lo = hi;
    best = probe.witness;
    hi *= 2.0;
    ++result.expansions;
  }

  while (hi - lo >= config.epsilon) {
    const double eta = 0.5 * (lo + hi);
    const auto probe = feasibility(eta, coeffs, p_haps_w);
    if (probe.ill_conditioned)
      spdlog::debug("equal-SINR system ill-conditioned at eta = {} (residual {})", eta, probe.residual);
    ++result.iterations;
    if (probe.feasible) {
      lo = eta;
      best = probe.witness;
    } else {
      hi = eta;
    }
    result.trace.push_back({result.iterations, lo, hi, eta, probe.feasible});
  }

  if (!best && lo > 0.0) best = feasibility(lo, coeffs, p_haps_w).witness;

  // Near the interference limit the equal-SINR power grows steeply in eta, so
  // the witness at the eps-bracket can leave much of the budget unused.
  // Tighten the bracket until the witness spends the whole budget.
  double polish_lo = lo;
  double polish_hi = hi;
  for (int i = 0; i < 200 && best && best->sum() < p_haps_w * (1.0 - 1e-10); ++i) {
    const double eta = 0.5 * (polish_lo + polish_hi);
    if (!(eta > polish_lo && eta < polish_hi)) break;
    auto probe = feasibility(eta, coeffs, p_haps_w);
    if (probe.feasible) {
      polish_lo = eta;
      best = probe.witness;
    } else {
      polish_hi = eta;
    }
  }

  Eigen::VectorXd p = best ? *best : Eigen::VectorXd::Constant(K, p_haps_w / K);
  p *= p_haps_w / p.sum();

  result.allocation.p = p;
  result.allocation.p_haps_w = p_haps_w;
  result.achieved_eta = sinr_from_coefficients(p, coeffs).minCoeff();
  result.eta_lo = lo;
  result.eta_hi = hi;
  return result;
}

MaxMinResult max_min_power(const SelectionMatrix& selection, const GainMatrix& gains,
                           const Eigen::VectorXd& beta_sq, double sigma_sq, double p_haps_w,
                           const BisectionConfig& config) {
  return max_min_power(link_coefficients(selection, gains, beta_sq, sigma_sq), p_haps_w, config);
}

}  // namespace haps
