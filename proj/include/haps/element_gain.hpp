// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#pragma once

#include "haps/geometry.hpp"

#include <Eigen/Core>

namespace haps {

/// Quadratic element pattern with a front-to-back clamp and a dark back
/// hemisphere.
struct GainPattern {
  double theta_3db_deg = 25.0;
  double gamma_max_db = 30.0;

  /// Peak gain 32400 / theta_3db^2 (unity at a 180 degree beamwidth).
  double g_e_max_linear() const { return 32400.0 / (theta_3db_deg * theta_3db_deg); }
  void validate() const;
};

/// K x M linear power gains, row = user, column = element.
using GainMatrix = Eigen::MatrixXd;

/// Linear gain of one element toward a direction theta degrees off boresight.
/// Returns 0 for theta >= 90. Throws std::invalid_argument outside [0, 180].
double element_gain_linear(double theta_deg, const GainPattern& pattern);

GainMatrix gain_matrix(const ArrayGeometry& geometry, const UserField& users,
                       const GainPattern& pattern);

/// Gain row for a single user; same values as one row of gain_matrix.
Eigen::VectorXd gain_row(const ArrayGeometry& geometry, const GroundUser& user,
                         const GainPattern& pattern);

}  // namespace haps
