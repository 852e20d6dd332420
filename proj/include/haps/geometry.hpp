// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace haps {

using Vec3 = Eigen::Vector3d;

inline constexpr double kSpeedOfLight = 3.0e8;
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

enum class Architecture { Hemispherical, Cylindrical, Rectangular, Hybrid };

std::string_view to_string(Architecture arch);

/// Accepts full names ("hemispherical") and the short scheme labels ("haa",
/// "caa", "raa", "hrcaa"). Throws std::invalid_argument otherwise.
Architecture parse_architecture(std::string_view name);

/// Shape parameters for every architecture. Only the fields relevant to the
/// selected architecture are read by build_array.
struct ArrayParams {
  int num_elements = 2650;
  double altitude_m = 20000.0;

  double hemisphere_radius_m = 3.0;

  // Cylinder: rings stacked vertically, elements evenly spaced around each ring.
  // A non-positive radius means "derive from the circumferential spacing".
  int cyl_rings = 50;
  int cyl_per_ring = 53;
  double cyl_radius_m = 0.0;
  double cyl_spacing_m = 0.075;

  int rect_rows = 50;
  int rect_cols = 53;
  double rect_spacing_m = 0.075;

  // Hybrid: cylinder (hyb_cyl_rings x hyb_cyl_per_ring == m_cyl) over a
  // downward-facing rectangular panel holding m_rect elements.
  int m_cyl = 2000;
  int m_rect = 650;
  int hyb_cyl_rings = 50;
  int hyb_cyl_per_ring = 40;
};

/// Polar coordinates of a point relative to the array origin. theta is
/// measured from the downward (nadir) axis, phi is the azimuth from +x.
struct Polar {
  double d_m = 0.0;
  double theta_deg = 0.0;
  double phi_deg = 0.0;
};

Polar to_polar(const Vec3& p);
Vec3 from_polar(const Polar& polar);

struct ElementPose {
  Vec3 position = Vec3::Zero();
  Vec3 boresight = -Vec3::UnitZ();
  Polar polar;
};

struct ArrayGeometry {
  Architecture architecture = Architecture::Hemispherical;
  double origin_altitude_m = 20000.0;
  double nominal_radius_m = 0.0;
  std::vector<ElementPose> elements;

  std::size_t size() const { return elements.size(); }
};

/// Deterministic construction of one of the four array architectures.
/// Throws std::invalid_argument on non-positive counts/lengths or a hybrid
/// split that does not add up to num_elements.
ArrayGeometry build_array(Architecture arch, const ArrayParams& params);

/// Checks every structural invariant of an ArrayGeometry; returns an empty
/// string when all hold, otherwise a description of the first violation.
std::string check_invariants(const ArrayGeometry& geometry);

struct GroundUser {
  double x_m = 0.0;
  double y_m = 0.0;
  double d_m = 0.0;           // slant range to the array origin
  double theta_deg = 0.0;     // from nadir
  double phi_deg = 0.0;
  double elevation_deg = 90.0;
  Vec3 direction = -Vec3::UnitZ();  // unit vector origin -> user
};

GroundUser make_user(double x_m, double y_m, double altitude_m);

struct UserField {
  double altitude_m = 20000.0;
  std::vector<GroundUser> users;

  std::size_t size() const { return users.size(); }
};

UserField make_user_field(const std::vector<std::pair<double, double>>& xy, double altitude_m);

/// Angle in degrees between an element boresight and the direction from the
/// array origin to the user (far-field convention), in [0, 180].
double angle_element_user(const ElementPose& element, const GroundUser& user);

/// Exact element-to-user distance by the triangle law, using the angle
/// between the element position vector and the user direction.
double distance_element_user(const ElementPose& element, const GroundUser& user);

/// Triangle law d = sqrt(dk^2 + dm^2 - 2 dk dm cos(theta)).
double triangle_distance(double d_k, double d_m, double theta_deg);

/// Rotates a geometry about the vertical axis; used by invariance checks.
ArrayGeometry rotated_about_z(const ArrayGeometry& geometry, double angle_deg);

}  // namespace haps
