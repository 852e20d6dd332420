// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/element_gain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace haps {

void GainPattern::validate() const {
  if (!(theta_3db_deg > 0.0 && theta_3db_deg <= 180.0))
    throw std::invalid_argument("theta_3db must be in (0, 180]");
  if (!(gamma_max_db >= 0.0)) throw std::invalid_argument("gamma_max_db must be non-negative");
}

double element_gain_linear(double theta_deg, const GainPattern& pattern) {
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0))
    throw std::invalid_argument("element_gain_linear: angle outside [0, 180]");
  if (theta_deg >= 90.0) return 0.0;
  const double ratio = theta_deg / pattern.theta_3db_deg;
  const double attenuation_db = std::min(12.0 * ratio * ratio, pattern.gamma_max_db);
  return pattern.g_e_max_linear() * std::pow(10.0, -attenuation_db / 10.0);
}

Eigen::VectorXd gain_row(const ArrayGeometry& geometry, const GroundUser& user,
                         const GainPattern& pattern) {
  Eigen::VectorXd row(static_cast<Eigen::Index>(geometry.size()));
  for (std::size_t m = 0; m < geometry.size(); ++m)
    row[static_cast<Eigen::Index>(m)] =
        element_gain_linear(angle_element_user(geometry.elements[m], user), pattern);
  return row;
}

GainMatrix gain_matrix(const ArrayGeometry& geometry, const UserField& users,
                       const GainPattern& pattern) {
  GainMatrix g(static_cast<Eigen::Index>(users.size()), static_cast<Eigen::Index>(geometry.size()));
  for (std::size_t k = 0; k < users.size(); ++k)
    g.row(static_cast<Eigen::Index>(k)) = gain_row(geometry, users.users[k], pattern).transpose();
  return g;
}

}  // namespace haps
