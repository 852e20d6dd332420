// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

// Acceptance checks. Prints one PASS/FAIL line per check and exits non-zero
// if any check fails.

#include "haps/config.hpp"
#include "haps/scenario.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace haps;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Check {
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

UserField random_users(std::mt19937_64& rng, int count, double side_m, double altitude_m) {
  std::uniform_real_distribution<double> u(-side_m / 2.0, side_m / 2.0);
  std::vector<std::pair<double, double>> xy;
  for (int k = 0; k < count; ++k) {
    const double x = u(rng);
    xy.emplace_back(x, u(rng));
  }
  return make_user_field(xy, altitude_m);
}

// ---------------------------------------------------------------------------

Outcome closed_form_vs_monte_carlo() {
  ScenarioConfig cfg;
  cfg.array.num_elements = 64;
  const ArrayGeometry geo = build_array(Architecture::Hemispherical, cfg.array);
  std::mt19937_64 rng(2024);
  const UserField users = random_users(rng, 4, cfg.area_side_m, cfg.array.altitude_m);
  const ChannelParams ch = cfg.channel_params();
  std::vector<LinkBudget> budgets = link_budgets(users, ch);
  Eigen::VectorXd beta(4);
  for (int k = 0; k < 4; ++k) {
    auto& b = budgets[static_cast<std::size_t>(k)];
    b.p_los = 1.0;
    b.pl_db = b.fspl_db + ch.eta_los_db;
    b.beta_sq = db_to_linear(-b.pl_db);
    beta[k] = b.beta_sq;
  }
  const GainMatrix g = gain_matrix(geo, users, cfg.pattern);
  const SelectionMatrix sel = select_greedy(g, 8);
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(4, cfg.p_haps_w / 4.0);
  const Eigen::VectorXd closed = sinr_closed_form(p, sel, g, beta, ch.noise_power_w);
  const MonteCarloEstimate mc = sinr_monte_carlo(users, geo, budgets, sel, p, cfg.pattern, ch, 10000, 7);
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, rel_err(mc.sinr[k], closed[k]));
  return {worst <= 0.05, fmt::format("max relative deviation {:.4f} (limit 0.05)", worst)};
}

Outcome large_k_limit() {
  const int K = 4096;
  const int m_k = 64;
  const double bw = 20.0e6;
  const GainMatrix ones = GainMatrix::Ones(K, m_k);
  const SelectionMatrix sel = select_greedy(ones, m_k);
  const Eigen::VectorXd sinr = sinr_interference_limited(sel, ones);
  const double sum = rate_report(sinr, bw).sum_rate_bps();
  const double limit = sum_rate_asymptotic(m_k, bw);
  const double e = rel_err(sum, limit);
  return {e <= 0.01 && std::abs(limit - 1.846e9) < 1e6,
          fmt::format("sum rate {:.6g} bps vs limit {:.6g} bps, deviation {:.5f}", sum, limit, e)};
}

Outcome gain_constants() {
  const GainPattern pat;
  const double g_max = pat.g_e_max_linear();
  const double half = element_gain_linear(pat.theta_3db_deg / 2.0, pat);
  const double drop_db = linear_to_db(half / g_max);
  const bool ok = std::abs(g_max - 51.84) < 1e-12 && std::abs(linear_to_db(g_max) - 17.15) < 0.005 &&
                  std::abs(drop_db + 3.0) < 1e-12;
  return {ok, fmt::format("G_max {:.10g} ({:.4f} dB), gain at theta_3db/2 {:.12f} dB", g_max,
                          linear_to_db(g_max), drop_db)};
}

// Best min-SINR over all power vectors p = P (i, j, l, m) / n with positive
// integer parts summing to n.
double simplex_grid_min_sinr(const LinkCoefficients& c, double p_haps, int n, long long& points) {
  double best = 0.0;
  points = 0;
  Eigen::VectorXd p(4);
  for (int i = 1; i <= n - 3; ++i)
    for (int j = 1; i + j <= n - 2; ++j)
      for (int l = 1; i + j + l <= n - 1; ++l) {
        const int m = n - i - j - l;
        p << i, j, l, m;
        p *= p_haps / n;
        ++points;
        const Eigen::VectorXd interference = c.coupling * p;
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 4 && worst > best; ++k)
          worst = std::min(worst, c.signal[k] * p[k] / (interference[k] + c.sigma_sq));
        best = std::max(best, worst);
      }
  return best;
}

Outcome max_min_vs_grid() {
  ScenarioConfig cfg;
  const ArrayGeometry geo = build_array(Architecture::Hemispherical, cfg.array);
  const ChannelParams ch = cfg.channel_params();
  std::mt19937_64 rng(99);
  const int n = 183;
  double worst_gap = 0.0;
  double worst_spread = 0.0;
  double worst_sum = 0.0;
  long long points = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const UserField users = random_users(rng, 4, cfg.area_side_m, cfg.array.altitude_m);
    const auto budgets = link_budgets(users, ch);
    Eigen::VectorXd beta(4);
    for (int k = 0; k < 4; ++k) beta[k] = budgets[static_cast<std::size_t>(k)].beta_sq;
    const GainMatrix g = gain_matrix(geo, users, cfg.pattern);
    const SelectionMatrix sel = select_greedy(g, cfg.m_k);
    const LinkCoefficients coeffs = link_coefficients(sel, g, beta, ch.noise_power_w);
    const MaxMinResult mm = max_min_power(coeffs, cfg.p_haps_w, cfg.bisection);
    const Eigen::VectorXd sinr = sinr_from_coefficients(mm.allocation.p, coeffs);
    const double oracle = simplex_grid_min_sinr(coeffs, cfg.p_haps_w, n, points);
    worst_gap = std::max(worst_gap, rel_err(sinr.minCoeff(), oracle));
    worst_spread = std::max(worst_spread, sinr.maxCoeff() - sinr.minCoeff());
    worst_sum = std::max(worst_sum, rel_err(mm.allocation.p.sum(), cfg.p_haps_w));
  }
  const double eps = cfg.bisection.epsilon;
  const bool ok = worst_gap <= 0.01 && worst_spread <= 2.0 * eps && worst_sum <= 1e-6;
  return {ok, fmt::format("max gap to {}-point grid {:.5f}, max spread {:.5f} (limit {:.2f}), "
                          "max budget error {:.2e}",
                          points, worst_gap, worst_spread, 2.0 * eps, worst_sum)};
}

Outcome greedy_vs_brute_force() {
  ScenarioConfig cfg;
  const ChannelParams ch = cfg.channel_params();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick_m(4, 10), pick_k(1, 2), pick_mk(1, 3);
  double worst_ratio = 1.0;
  int disjoint = 0;
  int disjoint_mismatch = 0;
  for (int inst = 0; inst < 50; ++inst) {
    ArrayParams ap = cfg.array;
    ap.num_elements = pick_m(rng);
    const int K = pick_k(rng);
    const int m_k = std::min(pick_mk(rng), ap.num_elements);
    const ArrayGeometry geo = build_array(Architecture::Hemispherical, ap);
    const UserField users = random_users(rng, K, cfg.area_side_m, ap.altitude_m);
    const auto budgets = link_budgets(users, ch);
    Eigen::VectorXd beta(K);
    for (int k = 0; k < K; ++k) beta[k] = budgets[static_cast<std::size_t>(k)].beta_sq;
    const GainMatrix g = gain_matrix(geo, users, cfg.pattern);
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(K, cfg.p_haps_w / K);
    const SelectionMatrix greedy = select_greedy(g, m_k);
    const SelectionMatrix brute = select_brute_force(g, m_k, p, {beta, ch.noise_power_w});
    const double gmin = sinr_closed_form(p, greedy, g, beta, ch.noise_power_w).minCoeff();
    const double bmin = sinr_closed_form(p, brute, g, beta, ch.noise_power_w).minCoeff();
    worst_ratio = std::min(worst_ratio, bmin > 0.0 ? gmin / bmin : 1.0);
    const auto counts = greedy.column_counts();
    if (std::all_of(counts.begin(), counts.end(), [](int c) { return c <= 1; })) {
      ++disjoint;
      if (rel_err(gmin, bmin) > 1e-9) ++disjoint_mismatch;
    }
  }
  return {worst_ratio >= 0.95 && disjoint_mismatch == 0,
          fmt::format("worst greedy/brute ratio {:.4f} (limit 0.95); {} disjoint instances, {} not equal",
                      worst_ratio, disjoint, disjoint_mismatch)};
}

Outcome abstract_scale() {
  ScenarioConfig cfg;  // all defaults
  const ScenarioResult r = run_pipeline(cfg);
  const double sum = r.sum_rate_bps();
  return {sum >= 9.0e9 && sum <= 19.0e9,
          fmt::format("sum rate {:.4g} Gbps (target [9, 19] Gbps)", sum / 1e9)};
}

Outcome cdf_ordering_60km() {
  ScenarioConfig cfg;
  cfg.experiment.kind = ExperimentKind::Cdf;
  const ScenarioResult r = run_cdf(cfg);
  const double haa = cdf_median(r.cdf, "HAA");
  const double hyb = cdf_median(r.cdf, "HRCAA");
  const double caa = cdf_median(r.cdf, "CAA");
  const double raa = cdf_median(r.cdf, "RAA");
  return {haa > hyb && haa > caa && haa > raa,
          fmt::format("median SE HAA {:.3f}, HRCAA {:.3f}, CAA {:.3f}, RAA {:.3f} bps/Hz", haa, hyb, caa, raa)};
}

Outcome cdf_ordering_200km() {
  ScenarioConfig cfg;
  cfg.area_side_m = 200000.0;
  cfg.experiment.kind = ExperimentKind::Cdf;
  cfg.experiment.schemes = {Architecture::Cylindrical, Architecture::Rectangular};
  const ScenarioResult r = run_cdf(cfg);
  const double caa = cdf_median(r.cdf, "CAA");
  const double raa = cdf_median(r.cdf, "RAA");
  return {caa > raa, fmt::format("median SE CAA {:.3f}, RAA {:.3f} bps/Hz", caa, raa)};
}

Outcome heatmap_uniformity() {
  ScenarioConfig cfg;
  cfg.experiment.kind = ExperimentKind::Heatmap;
  double cv[3];
  const Architecture archs[3] = {Architecture::Hemispherical, Architecture::Rectangular,
                                 Architecture::Cylindrical};
  for (int i = 0; i < 3; ++i) {
    cfg.architecture = archs[i];
    cv[i] = coefficient_of_variation(run_heatmap(cfg).heatmap);
  }
  return {cv[0] < cv[1] && cv[0] < cv[2],
          fmt::format("coefficient of variation HAA {:.4f}, RAA {:.4f}, CAA {:.4f}", cv[0], cv[1], cv[2])};
}

Outcome mk_sweep_peak() {
  ScenarioConfig cfg;
  cfg.pattern.theta_3db_deg = 10.0;
  cfg.experiment.kind = ExperimentKind::SweepMk;
  cfg.experiment.sweep = {16, 32, 64, 128, 256};
  const ScenarioResult r = run_sweep(cfg);
  std::string values;
  double best = -1.0;
  double best_mk = 0.0;
  for (const auto& row : r.sweep) {
    values += fmt::format("{}{:g}:{:.3f}", values.empty() ? "" : ", ", row.value, row.sum_rate_bps / 1e9);
    if (row.sum_rate_bps > best) {
      best = row.sum_rate_bps;
      best_mk = row.value;
    }
  }
  return {best_mk == 32.0, fmt::format("peak at M_k={:g}; sum rate Gbps by M_k: {}", best_mk, values)};
}

Outcome geometry_invariants() {
  ScenarioConfig cfg;
  std::string problems;
  std::mt19937_64 rng(11);
  const UserField users = random_users(rng, 32, cfg.area_side_m, cfg.array.altitude_m);
  for (Architecture a : {Architecture::Hemispherical, Architecture::Cylindrical,
                         Architecture::Rectangular, Architecture::Hybrid}) {
    const ArrayGeometry geo = build_array(a, cfg.array);
    const std::string inv = check_invariants(geo);
    if (!inv.empty()) problems += std::string(to_string(a)) + ": " + inv + "; ";
    for (const auto& u : users.users)
      for (const auto& e : geo.elements) {
        const double d = distance_element_user(e, u);
        if (d < std::abs(u.d_m - e.polar.d_m) - 1e-9 || d > u.d_m + e.polar.d_m + 1e-9) {
          problems += "triangle bound violated; ";
          break;
        }
      }
    // Rotating array and users together leaves gains and distances unchanged.
    const double angle = 37.0;
    const ArrayGeometry rot = rotated_about_z(geo, angle);
    std::vector<std::pair<double, double>> xy_rot;
    const double c = std::cos(deg2rad(angle));
    const double s = std::sin(deg2rad(angle));
    for (const auto& u : users.users) xy_rot.emplace_back(c * u.x_m - s * u.y_m, s * u.x_m + c * u.y_m);
    const UserField users_rot = make_user_field(xy_rot, users.altitude_m);
    const GainMatrix g0 = gain_matrix(geo, users, cfg.pattern);
    const GainMatrix g1 = gain_matrix(rot, users_rot, cfg.pattern);
    const double gdiff = (g0 - g1).cwiseAbs().maxCoeff() / g0.cwiseAbs().maxCoeff();
    double ddiff = 0.0;
    for (std::size_t k = 0; k < users.size(); ++k)
      for (std::size_t m = 0; m < geo.size(); ++m)
        ddiff = std::max(ddiff, rel_err(distance_element_user(rot.elements[m], users_rot.users[k]),
                                        distance_element_user(geo.elements[m], users.users[k])));
    if (gdiff > 1e-9 || ddiff > 1e-9)
      problems += fmt::format("{} rotation changed gains by {:.2e}, distances by {:.2e}; ", to_string(a), gdiff, ddiff);
  }
  const ArrayGeometry haa = build_array(Architecture::Hemispherical, cfg.array);
  int min_forward = std::numeric_limits<int>::max();
  for (const auto& [x, y] : grid_positions(cfg.area_side_m, 100)) {
    const auto row = gain_row(haa, make_user(x, y, cfg.array.altitude_m), cfg.pattern);
    min_forward = std::min(min_forward, static_cast<int>((row.array() > 0.0).count()));
  }
  if (min_forward < 64) problems += fmt::format("only {} forward-facing elements at some grid point; ", min_forward);
  return {problems.empty(), problems.empty()
                                ? fmt::format("all architectures consistent; min forward-facing HAA elements {}", min_forward)
                                : problems};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  const std::vector<Check> checks = {
      {"closed-form SINR vs Monte Carlo", 30.0, closed_form_vs_monte_carlo},
      {"large-K sum-rate limit", 1.0, large_k_limit},
      {"element gain constants", 1.0, gain_constants},
      {"max-min power control vs simplex grid", 120.0, max_min_vs_grid},
      {"greedy selection vs brute force", 60.0, greedy_vs_brute_force},
      {"default-scenario sum rate in [9, 19] Gbps", 60.0, abstract_scale},
      {"ordering: 60 km CDF medians, HAA first", 300.0, cdf_ordering_60km},
      {"ordering: 200 km CDF median CAA > RAA", 300.0, cdf_ordering_200km},
      {"ordering: heatmap CV HAA below RAA and CAA", 300.0, heatmap_uniformity},
      {"ordering: M_k sweep at theta_3db=10 peaks at 32", 300.0, mk_sweep_peak},
      {"geometry invariants", 60.0, geometry_invariants},
  };
  int failures = 0;
  for (const auto& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > check.budget_s) {
      out.pass = false;
      out.detail += fmt::format(" [over runtime budget {:g} s]", check.budget_s);
    }
    if (!out.pass) ++failures;
    fmt::print("{} {}: {} ({:.2f} s)\n", out.pass ? "PASS" : "FAIL", check.name, out.detail, secs);
    std::fflush(stdout);
  }
  fmt::print("{} of {} checks passed\n", checks.size() - static_cast<std::size_t>(failures), checks.size());
  return failures == 0 ? 0 : 1;
}
