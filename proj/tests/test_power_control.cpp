// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/power_control.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace haps;

namespace {

LinkCoefficients make(std::initializer_list<double> a, std::initializer_list<std::initializer_list<double>> b,
                      double sigma) {
  LinkCoefficients c;
  c.signal = Eigen::VectorXd(static_cast<Eigen::Index>(a.size()));
  Eigen::Index i = 0;
  for (double v : a) c.signal[i++] = v;
  c.coupling = Eigen::MatrixXd(c.signal.size(), c.signal.size());
  i = 0;
  for (const auto& row : b) {
    Eigen::Index j = 0;
    for (double v : row) c.coupling(i, j++) = v;
    ++i;
  }
  c.sigma_sq = sigma;
  return c;
}

LinkCoefficients random_instance(std::mt19937_64& rng, int K) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LinkCoefficients c;
  c.signal = Eigen::VectorXd(K);
  c.coupling = Eigen::MatrixXd(K, K);
  for (int k = 0; k < K; ++k) {
    c.signal[k] = 5.0 + 20.0 * u(rng);
    for (int j = 0; j < K; ++j) c.coupling(k, j) = (k == j ? 0.5 : 0.05) * u(rng);
  }
  c.sigma_sq = 0.01 + u(rng);
  return c;
}

}  // namespace

TEST_SUITE("power_control") {

TEST_CASE("single-user feasibility") {
  const LinkCoefficients c = make({10.0}, {{1.0}}, 2.0);
  const double P = 5.0;
  // p1 = eta sigma / (a - eta b); feasible while p1 <= P.
  const double eta_star = c.signal[0] * P / (c.coupling(0, 0) * P + c.sigma_sq);
  const FeasibilityResult ok = feasibility(0.9 * eta_star, c, P);
  REQUIRE(ok.feasible);
  const double eta = 0.9 * eta_star;
  CHECK((*ok.witness)[0] == doctest::Approx(eta * 2.0 / (10.0 - eta * 1.0)));
  CHECK(!feasibility(1.1 * eta_star, c, P).feasible);
  CHECK(feasibility(1e-9, c, P).feasible);
  CHECK_THROWS(feasibility(0.0, c, P));
}

TEST_CASE("single user receives the whole budget") {
  const LinkCoefficients c = make({10.0}, {{1.0}}, 2.0);
  const MaxMinResult r = max_min_power(c, 5.0);
  CHECK(r.allocation.p[0] == doctest::Approx(5.0));
  const double sinr = sinr_from_coefficients(r.allocation.p, c)[0];
  CHECK(std::abs(r.eta_lo - sinr) <= 0.01);
  CHECK(r.achieved_eta == doctest::Approx(sinr));
}

TEST_CASE("symmetric users get equal power") {
  const LinkCoefficients c = make({8.0, 8.0}, {{1.0, 0.3}, {0.3, 1.0}}, 0.5);
  const FeasibilityResult f = feasibility(2.0, c, 100.0);
  REQUIRE(f.feasible);
  CHECK((*f.witness)[0] == doctest::Approx((*f.witness)[1]));
  const MaxMinResult r = max_min_power(c, 10.0);
  CHECK(r.allocation.p[0] == doctest::Approx(r.allocation.p[1]));
  const Eigen::VectorXd sinr = sinr_from_coefficients(r.allocation.p, c);
  CHECK(sinr[0] == doctest::Approx(sinr[1]));
}

TEST_CASE("optimum properties on random instances") {
  std::mt19937_64 rng(11);
  const BisectionConfig cfg;
  for (int t = 0; t < 25; ++t) {
    const LinkCoefficients c = random_instance(rng, 2 + t % 5);
    const MaxMinResult r = max_min_power(c, 10.0, cfg);
    const Eigen::VectorXd sinr = sinr_from_coefficients(r.allocation.p, c);
    CHECK(sinr.maxCoeff() - sinr.minCoeff() <= 2.0 * cfg.epsilon);
    CHECK(r.allocation.p.sum() == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(r.allocation.check().empty());
    CHECK(r.eta_hi - r.eta_lo < cfg.epsilon);
    const double width = r.expansions > 0 ? cfg.eta_max * std::pow(2.0, r.expansions - 1)
                                          : cfg.eta_max - cfg.eta_min;
    CHECK(r.iterations <= static_cast<int>(std::ceil(std::log2(width / cfg.epsilon))));
    // Uniform scale-up never lowers the minimum SINR.
    CHECK(sinr_from_coefficients(2.0 * r.allocation.p, c).minCoeff() >= sinr.minCoeff());
  }
}

TEST_CASE("convex combination of witnesses stays feasible") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const LinkCoefficients c = random_instance(rng, 4);
    const MaxMinResult r = max_min_power(c, 10.0);
    const double eta = 0.5 * r.eta_lo;
    const FeasibilityResult f = feasibility(eta, c, 10.0);
    REQUIRE(f.feasible);
    const Eigen::VectorXd other = r.allocation.p;  // SINR >= eta_lo > eta everywhere
    for (double w : {0.25, 0.5, 0.75}) {
      const Eigen::VectorXd mix = w * *f.witness + (1.0 - w) * other;
      CHECK(sinr_from_coefficients(mix, c).minCoeff() >= eta * (1.0 - 1e-12));
      CHECK(mix.sum() <= 10.0 * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("eta_max is doubled when feasible") {
  const LinkCoefficients c = make({1e6}, {{1.0}}, 1e-3);
  BisectionConfig cfg;
  cfg.eta_max = 10.0;
  const MaxMinResult r = max_min_power(c, 1.0, cfg);
  CHECK(r.expansions > 0);
  CHECK(r.achieved_eta > 10.0);
}

TEST_CASE("trace rows bracket the target") {
  const LinkCoefficients c = make({8.0, 6.0}, {{1.0, 0.3}, {0.2, 1.0}}, 0.5);
  const MaxMinResult r = max_min_power(c, 10.0);
  REQUIRE(!r.trace.empty());
  for (const auto& row : r.trace) {
    CHECK(row.eta_min <= row.eta_max);
    CHECK(row.iteration >= 1);
  }
  CHECK(r.trace.back().eta_max - r.trace.back().eta_min < 0.01);
}

TEST_CASE("invalid configuration") {
  BisectionConfig cfg;
  cfg.eta_min = 5.0;
  cfg.eta_max = 1.0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.epsilon = 0.0;
  CHECK_THROWS(cfg.validate());
  CHECK_THROWS(max_min_power(make({1.0}, {{1.0}}, 0.0), 1.0));
}

}
