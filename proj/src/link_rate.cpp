// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/link_rate.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace haps {

namespace {

void check_dims(const SelectionMatrix& selection, const GainMatrix& gains) {
  if (gains.rows() != selection.num_users || gains.cols() != selection.num_elements)
    throw std::invalid_argument("selection and gain matrix dimensions differ");
  for (int k = 0; k < selection.num_users; ++k)
    if (selection.m_k(k) == 0)
      throw std::invalid_argument("user " + std::to_string(k) + " has no selected elements");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finaliser over the combined key
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::string PowerAllocation::check() const {
  std::ostringstream err;
  for (Eigen::Index k = 0; k < p.size(); ++k)
    if (!(p[k] > 0.0)) {
      err << "power of user " << k << " is not positive";
      return err.str();
    }
  if (p.sum() > p_haps_w + 1e-9) {
    err << "total power " << p.sum() << " W exceeds budget " << p_haps_w << " W";
    return err.str();
  }
  return {};
}

Eigen::VectorXd amplitude_sums(const SelectionMatrix& selection, const GainMatrix& gains) {
  check_dims(selection, gains);
  Eigen::VectorXd t(selection.num_users);
  for (int k = 0; k < selection.num_users; ++k) {
    double s = 0.0;
    for (int m : selection.selected[static_cast<std::size_t>(k)]) s += std::sqrt(gains(k, m));
    t[k] = s;
  }
  return t;
}

Eigen::MatrixXd cross_power_sums(const SelectionMatrix& selection, const GainMatrix& gains) {
  check_dims(selection, gains);
  return gains * selection.dense().transpose();
}

LinkCoefficients link_coefficients(const SelectionMatrix& selection, const GainMatrix& gains,
                                   const Eigen::VectorXd& beta_sq, double sigma_sq) {
  if (beta_sq.size() != selection.num_users)
    throw std::invalid_argument("beta_sq length differs from K");
  const Eigen::VectorXd t = amplitude_sums(selection, gains);
  const Eigen::MatrixXd s = cross_power_sums(selection, gains);
  LinkCoefficients c;
  c.sigma_sq = sigma_sq;
  c.signal.resize(selection.num_users);
  c.coupling.resize(selection.num_users, selection.num_users);
  for (int k = 0; k < selection.num_users; ++k) {
    c.signal[k] = beta_sq[k] * t[k] * t[k] / selection.m_k(k);
    for (int j = 0; j < selection.num_users; ++j)
      c.coupling(k, j) = beta_sq[k] * s(k, j) / selection.m_k(j);
  }
  return c;
}

Eigen::VectorXd sinr_from_coefficients(const Eigen::VectorXd& p, const LinkCoefficients& coeffs) {
  if (p.size() != coeffs.size()) throw std::invalid_argument("power vector length differs from K");
  const Eigen::VectorXd denom = (coeffs.coupling * p).array() + coeffs.sigma_sq;
  return (coeffs.signal.array() * p.array() / denom.array()).matrix();
}

Eigen::VectorXd sinr_closed_form(const Eigen::VectorXd& p, const SelectionMatrix& selection,
                                 const GainMatrix& gains, const Eigen::VectorXd& beta_sq,
                                 double sigma_sq) {
  check_dims(selection, gains);
  const int K = selection.num_users;
  if (p.size() != K || beta_sq.size() != K)
    throw std::invalid_argument("power or beta_sq length differs from K");

  // Per-element radiated load: sum over users served by m of p_k' / M_k'.
  Eigen::VectorXd load = Eigen::VectorXd::Zero(selection.num_elements);
  for (int j = 0; j < K; ++j) {
    const double share = p[j] / selection.m_k(j);
    for (int m : selection.selected[static_cast<std::size_t>(j)]) load[m] += share;
  }
  const Eigen::VectorXd interference = gains * load;
  const Eigen::VectorXd t = amplitude_sums(selection, gains);

  Eigen::VectorXd sinr(K);
  for (int k = 0; k < K; ++k) {
    const double num = p[k] * beta_sq[k] * t[k] * t[k] / selection.m_k(k);
    const double den = beta_sq[k] * interference[k] + sigma_sq;
    sinr[k] = num == 0.0 ? 0.0 : num / den;
  }
  return sinr;
}

double rate(double sinr, double bandwidth_hz) { return bandwidth_hz * std::log2(1.0 + sinr); }

RateReport rate_report(const Eigen::VectorXd& sinr, double bandwidth_hz) {
  RateReport r;
  r.sinr = sinr;
  r.bandwidth_hz = bandwidth_hz;
  r.rate_bps = sinr.unaryExpr([bandwidth_hz](double s) { return rate(s, bandwidth_hz); });
  return r;
}

Eigen::VectorXd sinr_interference_limited(const SelectionMatrix& selection, const GainMatrix& gains) {
  check_dims(selection, gains);
  const int m_k = selection.m_k(0);
  for (int k = 1; k < selection.num_users; ++k)
    if (selection.m_k(k) != m_k)
      throw std::invalid_argument("interference-limited SINR requires equal M_k for all users");

  Eigen::VectorXd users_per_element = Eigen::VectorXd::Zero(selection.num_elements);
  for (const auto& row : selection.selected)
    for (int m : row) users_per_element[m] += 1.0;
  const Eigen::VectorXd total = gains * users_per_element;
  const Eigen::VectorXd t = amplitude_sums(selection, gains);
  return (t.array().square() / total.array()).matrix();
}

double sum_rate_asymptotic(int m_k, double bandwidth_hz) {
  return bandwidth_hz * m_k * std::log2(std::exp(1.0));
}

MonteCarloEstimate sinr_monte_carlo(const UserField& users, const ArrayGeometry& geometry,
                                    const std::vector<LinkBudget>& budgets,
                                    const SelectionMatrix& selection, const Eigen::VectorXd& p,
                                    const GainPattern& pattern, const ChannelParams& params,
                                    int n_draws, std::uint64_t seed) {
  if (n_draws < 10) throw std::invalid_argument("sinr_monte_carlo: need at least 10 draws");
  const int K = static_cast<int>(users.size());
  if (selection.num_users != K || static_cast<int>(budgets.size()) != K || p.size() != K ||
      selection.num_elements != static_cast<int>(geometry.size()))
    throw std::invalid_argument("sinr_monte_carlo: inconsistent dimensions");

  const GainMatrix gains = gain_matrix(geometry, users, pattern);
  check_dims(selection, gains);
  const double lambda = params.wavelength_m();
  const double sigma = std::sqrt(params.noise_power_w);

  // Matched analog beamformers: w_km = conj(b_km) / sqrt(M_k) on selected elements.
  std::vector<std::vector<cd>> w(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const auto& user = users.users[static_cast<std::size_t>(k)];
    const double norm = 1.0 / std::sqrt(static_cast<double>(selection.m_k(k)));
    for (int m : selection.selected[static_cast<std::size_t>(k)])
      w[static_cast<std::size_t>(k)].push_back(
          std::conj(steering_phasor(distance_element_user(geometry.elements[static_cast<std::size_t>(m)], user),
                                    lambda)) *
          norm);
  }

  std::mt19937_64 rng(mix_seed(seed, 0xfeed, 0));
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * kPi);
  std::uniform_int_distribution<int> quadrant(0, 3);
  const cd qpsk[4] = {cd(1, 1) / std::sqrt(2.0), cd(-1, 1) / std::sqrt(2.0),
                      cd(-1, -1) / std::sqrt(2.0), cd(1, -1) / std::sqrt(2.0)};

  MonteCarloEstimate est;
  est.sinr.resize(K);
  est.std_error.resize(K);
  est.mean_desired.resize(K);
  est.received_power.resize(K);

  std::vector<cd> symbols(static_cast<std::size_t>(K));
  std::vector<cd> h_random(geometry.size());
  for (int k = 0; k < K; ++k) {
    const auto& user = users.users[static_cast<std::size_t>(k)];
    const auto& lb = budgets[static_cast<std::size_t>(k)];
    const double amplitude = std::pow(10.0, -lb.pl_db / 20.0);
    const double los = std::sqrt(lb.p_los);
    const double nlos = std::sqrt(lb.p_nlos());
    const auto& own = selection.selected[static_cast<std::size_t>(k)];

    cd ds_sum = 0.0;
    double ds_sq = 0.0;
    double pw_sum = 0.0;
    double pw_sq = 0.0;
    for (int n = 0; n < n_draws; ++n) {
      // Desired-signal coefficient through the drawn channel.
      const auto h = sample_channel(user, geometry, lb, params, mix_seed(seed, static_cast<std::uint64_t>(n),
                                                                          static_cast<std::uint64_t>(k)));
      cd ds = 0.0;
      for (std::size_t i = 0; i < own.size(); ++i) {
        const int m = own[i];
        ds += h[static_cast<std::size_t>(m)] * std::sqrt(gains(k, m)) * w[static_cast<std::size_t>(k)][i];
      }
      ds *= std::sqrt(p[k]);
      ds_sum += ds;
      ds_sq += std::norm(ds);

      // Received interference-plus-noise under the random-phase ensemble.
      for (std::size_t m = 0; m < geometry.size(); ++m)
        h_random[m] = amplitude * (los * std::polar(1.0, uniform(rng)) + nlos * cd(normal(rng), normal(rng)));
      for (auto& s : symbols) s = qpsk[quadrant(rng)];
      cd y = sigma * cd(normal(rng), normal(rng));
      for (int j = 0; j < K; ++j) {
        const auto& sel = selection.selected[static_cast<std::size_t>(j)];
        cd acc = 0.0;
        for (std::size_t i = 0; i < sel.size(); ++i) {
          const int m = sel[i];
          acc += h_random[static_cast<std::size_t>(m)] * std::sqrt(gains(k, m)) *
                 w[static_cast<std::size_t>(j)][i];
        }
        y += acc * std::sqrt(p[j]) * symbols[static_cast<std::size_t>(j)];
      }
      const double pw = std::norm(y);
      pw_sum += pw;
      pw_sq += pw * pw;
    }
    const double n = n_draws;
    const cd ds_mean = ds_sum / n;
    const double pw_mean = pw_sum / n;
    const double ds_var = std::max(0.0, ds_sq / n - std::norm(ds_mean));
    const double pw_var = std::max(0.0, pw_sq / n - pw_mean * pw_mean);

    est.mean_desired[k] = ds_mean;
    est.received_power[k] = pw_mean;
    est.sinr[k] = std::norm(ds_mean) / pw_mean;
    const double rel_ds = std::abs(ds_mean) > 0.0 ? std::sqrt(ds_var / n) / std::abs(ds_mean) : 0.0;
    const double rel_pw = std::sqrt(pw_var / n) / pw_mean;
    est.std_error[k] = est.sinr[k] * std::sqrt(4.0 * rel_ds * rel_ds + rel_pw * rel_pw);
  }
  return est;
}

}  // namespace haps
