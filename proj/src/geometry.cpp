// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace haps {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

ElementPose make_pose(const Vec3& position, const Vec3& boresight) {
  ElementPose pose;
  pose.position = position;
  pose.boresight = boresight.normalized();
  pose.polar = to_polar(position);
  return pose;
}

// Rings are centred on z = 0 and numbered from the top.
void append_cylinder(std::vector<ElementPose>& out, int rings, int per_ring, double radius,
                     double spacing) {
  const double height = rings * spacing;
  for (int r = 0; r < rings; ++r) {
    const double z = height / 2.0 - (r + 0.5) * spacing;
    for (int j = 0; j < per_ring; ++j) {
      const double phi = 2.0 * kPi * j / per_ring;
      const Vec3 radial(std::cos(phi), std::sin(phi), 0.0);
      out.push_back(make_pose(Vec3(radius * radial.x(), radius * radial.y(), z), radial));
    }
  }
}

// Row-major grid centred on (0, 0, z); a trailing partial row is centred too.
void append_panel(std::vector<ElementPose>& out, int count, int cols, double spacing, double z) {
  const int rows = (count + cols - 1) / cols;
  for (int r = 0; r < rows; ++r) {
    const int in_row = std::min(cols, count - r * cols);
    const double y = (r - (rows - 1) / 2.0) * spacing;
    for (int c = 0; c < in_row; ++c) {
      const double x = (c - (in_row - 1) / 2.0) * spacing;
      out.push_back(make_pose(Vec3(x, y, z), -Vec3::UnitZ()));
    }
  }
}

double ring_radius(int per_ring, double configured, double spacing) {
  return configured > 0.0 ? configured : per_ring * spacing / (2.0 * kPi);
}

double bounding_radius(const std::vector<ElementPose>& elements) {
  double r = 0.0;
  for (const auto& e : elements) r = std::max(r, e.position.norm());
  return r;
}

}  // namespace

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::Hemispherical: return "hemispherical";
    case Architecture::Cylindrical: return "cylindrical";
    case Architecture::Rectangular: return "rectangular";
    case Architecture::Hybrid: return "hybrid";
  }
  return "unknown";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "hemispherical" || name == "haa") return Architecture::Hemispherical;
  if (name == "cylindrical" || name == "caa") return Architecture::Cylindrical;
  if (name == "rectangular" || name == "raa") return Architecture::Rectangular;
  if (name == "hybrid" || name == "hrcaa") return Architecture::Hybrid;
  throw std::invalid_argument("unknown architecture '" + std::string(name) + "'");
}

Polar to_polar(const Vec3& p) {
  Polar out;
  out.d_m = p.norm();
  if (out.d_m == 0.0) return out;
  out.theta_deg = rad2deg(std::acos(std::clamp(-p.z() / out.d_m, -1.0, 1.0)));
  out.phi_deg = rad2deg(std::atan2(p.y(), p.x()));
  return out;
}

Vec3 from_polar(const Polar& polar) {
  const double t = deg2rad(polar.theta_deg);
  const double f = deg2rad(polar.phi_deg);
  return polar.d_m * Vec3(std::sin(t) * std::cos(f), std::sin(t) * std::sin(f), -std::cos(t));
}

ArrayGeometry build_array(Architecture arch, const ArrayParams& params) {
  require(params.num_elements > 0, "num_elements must be positive");
  require(params.altitude_m > 0.0, "altitude_m must be positive");

  ArrayGeometry g;
  g.architecture = arch;
  g.origin_altitude_m = params.altitude_m;
  g.elements.reserve(static_cast<std::size_t>(params.num_elements));
  const int m = params.num_elements;

  switch (arch) {
    case Architecture::Hemispherical: {
      require(params.hemisphere_radius_m > 0.0, "hemisphere_radius_m must be positive");
      // Fibonacci lattice: equal-area bands in cos(theta), golden-angle azimuths.
      const double golden = kPi * (3.0 - std::sqrt(5.0));
      for (int i = 0; i < m; ++i) {
        const double cos_t = 1.0 - (i + 0.5) / m;
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        const double phi = std::fmod(golden * i, 2.0 * kPi);
        const Vec3 dir(sin_t * std::cos(phi), sin_t * std::sin(phi), -cos_t);
        g.elements.push_back(make_pose(params.hemisphere_radius_m * dir, dir));
      }
      break;
    }
    case Architecture::Cylindrical: {
      require(params.cyl_rings > 0 && params.cyl_per_ring > 0, "cyl_rings and cyl_per_ring must be positive");
      require(params.cyl_spacing_m > 0.0, "cyl_spacing_m must be positive");
      require(params.cyl_radius_m >= 0.0, "cyl_radius_m must be non-negative");
      require(params.cyl_rings * params.cyl_per_ring == m,
              "cyl_rings * cyl_per_ring must equal num_elements");
      append_cylinder(g.elements, params.cyl_rings, params.cyl_per_ring,
                      ring_radius(params.cyl_per_ring, params.cyl_radius_m, params.cyl_spacing_m),
                      params.cyl_spacing_m);
      break;
    }
    case Architecture::Rectangular: {
      require(params.rect_rows > 0 && params.rect_cols > 0, "rect_rows and rect_cols must be positive");
      require(params.rect_spacing_m > 0.0, "rect_spacing_m must be positive");
      require(params.rect_rows * params.rect_cols == m,
              "rect_rows * rect_cols must equal num_elements");
      append_panel(g.elements, m, params.rect_cols, params.rect_spacing_m, 0.0);
      break;
    }
    case Architecture::Hybrid: {
      require(params.m_cyl > 0 && params.m_rect > 0, "m_cyl and m_rect must be positive");
      require(params.m_cyl + params.m_rect == m, "m_cyl + m_rect must equal num_elements");
      require(params.hyb_cyl_rings > 0 && params.hyb_cyl_per_ring > 0,
              "hyb_cyl_rings and hyb_cyl_per_ring must be positive");
      require(params.hyb_cyl_rings * params.hyb_cyl_per_ring == params.m_cyl,
              "hyb_cyl_rings * hyb_cyl_per_ring must equal m_cyl");
      require(params.cyl_spacing_m > 0.0 && params.rect_spacing_m > 0.0,
              "cyl_spacing_m and rect_spacing_m must be positive");
      require(params.cyl_radius_m >= 0.0, "cyl_radius_m must be non-negative");
      append_cylinder(g.elements, params.hyb_cyl_rings, params.hyb_cyl_per_ring,
                      ring_radius(params.hyb_cyl_per_ring, params.cyl_radius_m, params.cyl_spacing_m),
                      params.cyl_spacing_m);
      const double bottom = -params.hyb_cyl_rings * params.cyl_spacing_m / 2.0;
      const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(params.m_rect))));
      append_panel(g.elements, params.m_rect, cols, params.rect_spacing_m,
                   bottom - params.rect_spacing_m / 2.0);
      break;
    }
  }
  g.nominal_radius_m = bounding_radius(g.elements);
  return g;
}

std::string check_invariants(const ArrayGeometry& geometry) {
  std::ostringstream err;
  if (geometry.elements.empty()) return "array has no elements";
  const double limit = 2.0 * geometry.nominal_radius_m + 1e-12;
  for (std::size_t i = 0; i < geometry.size(); ++i) {
    const auto& e = geometry.elements[i];
    if (std::abs(e.boresight.norm() - 1.0) > 1e-12) {
      err << "element " << i << ": boresight is not unit norm";
      return err.str();
    }
    if (e.position.norm() > limit) {
      err << "element " << i << ": outside twice the nominal radius";
      return err.str();
    }
    if ((from_polar(e.polar) - e.position).norm() > 1e-9) {
      err << "element " << i << ": polar coordinates do not round-trip";
      return err.str();
    }
    switch (geometry.architecture) {
      case Architecture::Hemispherical:
        if (std::abs(e.polar.d_m - geometry.nominal_radius_m) > 1e-9 || e.position.z() > 1e-12 ||
            (e.boresight - e.position / e.polar.d_m).norm() > 1e-12) {
          err << "element " << i << ": not an outward radial on the lower hemisphere";
          return err.str();
        }
        break;
      case Architecture::Rectangular:
        if ((e.boresight + Vec3::UnitZ()).norm() > 1e-12) {
          err << "element " << i << ": rectangular boresight is not nadir";
          return err.str();
        }
        break;
      case Architecture::Cylindrical: {
        const Vec3 radial(e.position.x(), e.position.y(), 0.0);
        if (std::abs(e.boresight.z()) > 1e-12 || (e.boresight - radial.normalized()).norm() > 1e-9) {
          err << "element " << i << ": cylindrical boresight is not a horizontal radial";
          return err.str();
        }
        break;
      }
      case Architecture::Hybrid:
        break;
    }
  }
  return {};
}

GroundUser make_user(double x_m, double y_m, double altitude_m) {
  GroundUser u;
  u.x_m = x_m;
  u.y_m = y_m;
  const Vec3 p(x_m, y_m, -altitude_m);
  u.d_m = p.norm();
  u.direction = p / u.d_m;
  const double horizontal = std::hypot(x_m, y_m);
  u.theta_deg = rad2deg(std::atan2(horizontal, altitude_m));
  u.phi_deg = rad2deg(std::atan2(y_m, x_m));
  u.elevation_deg = 90.0 - u.theta_deg;
  return u;
}

UserField make_user_field(const std::vector<std::pair<double, double>>& xy, double altitude_m) {
  if (!(altitude_m > 0.0)) throw std::invalid_argument("altitude_m must be positive");
  UserField field;
  field.altitude_m = altitude_m;
  field.users.reserve(xy.size());
  for (const auto& [x, y] : xy) field.users.push_back(make_user(x, y, altitude_m));
  return field;
}

double angle_element_user(const ElementPose& element, const GroundUser& user) {
  const double c = std::clamp(element.boresight.dot(user.direction), -1.0, 1.0);
  return rad2deg(std::acos(c));
}

double triangle_distance(double d_k, double d_m, double theta_deg) {
  const double sq = d_k * d_k + d_m * d_m - 2.0 * d_k * d_m * std::cos(deg2rad(theta_deg));
  return std::sqrt(std::max(0.0, sq));
}

double distance_element_user(const ElementPose& element, const GroundUser& user) {
  const double d_m = element.polar.d_m;
  if (d_m == 0.0) return user.d_m;
  const double c = std::clamp(element.position.dot(user.direction) / d_m, -1.0, 1.0);
  const double sq = user.d_m * user.d_m + d_m * d_m - 2.0 * user.d_m * d_m * c;
  return std::sqrt(std::max(0.0, sq));
}

ArrayGeometry rotated_about_z(const ArrayGeometry& geometry, double angle_deg) {
  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(deg2rad(angle_deg), Vec3::UnitZ()).toRotationMatrix();
  ArrayGeometry out = geometry;
  for (auto& e : out.elements) {
    e.position = rot * e.position;
    e.boresight = (rot * e.boresight).normalized();
    e.polar = to_polar(e.position);
  }
  return out;
}

}  // namespace haps
