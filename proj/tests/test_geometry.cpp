// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/element_gain.hpp"
#include "haps/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace haps;

TEST_SUITE("geometry") {

TEST_CASE("hemisphere with reference parameters") {
  ArrayParams p;
  const ArrayGeometry g = build_array(Architecture::Hemispherical, p);
  CHECK(g.size() == 2650);
  CHECK(check_invariants(g).empty());
  for (const auto& e : g.elements) {
    CHECK(e.position.norm() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.position.z() <= 1e-12);
    CHECK(e.boresight.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // Boresight is the outward radial direction.
    CHECK((e.boresight - e.position / 3.0).norm() < 1e-12);
  }
}

TEST_CASE("rectangle 50 x 53 faces down") {
  const ArrayGeometry g = build_array(Architecture::Rectangular, {});
  CHECK(g.size() == 2650);
  CHECK(check_invariants(g).empty());
  for (const auto& e : g.elements) {
    CHECK(e.boresight.z() == doctest::Approx(-1.0));
    CHECK(e.position.z() == doctest::Approx(0.0));
  }
}

TEST_CASE("cylinder boresights are horizontal") {
  const ArrayGeometry g = build_array(Architecture::Cylindrical, {});
  CHECK(g.size() == 2650);
  CHECK(check_invariants(g).empty());
  for (const auto& e : g.elements) CHECK(std::abs(e.boresight.z()) < 1e-12);
}

TEST_CASE("hybrid 2000 + 650") {
  ArrayParams p;
  const ArrayGeometry g = build_array(Architecture::Hybrid, p);
  CHECK(g.size() == 2650);
  CHECK(check_invariants(g).empty());
  int down = 0;
  for (const auto& e : g.elements)
    if (e.boresight.z() < -0.999) ++down;
  CHECK(down == 650);
}

TEST_CASE("invalid shapes are rejected") {
  ArrayParams p;
  p.hemisphere_radius_m = 0.0;
  CHECK_THROWS_AS(build_array(Architecture::Hemispherical, p), std::invalid_argument);
  p = {};
  p.m_rect = 600;
  CHECK_THROWS_AS(build_array(Architecture::Hybrid, p), std::invalid_argument);
  p = {};
  p.rect_cols = 52;
  CHECK_THROWS_AS(build_array(Architecture::Rectangular, p), std::invalid_argument);
  p = {};
  p.num_elements = 0;
  CHECK_THROWS_AS(build_array(Architecture::Hemispherical, p), std::invalid_argument);
}

TEST_CASE("build is deterministic") {
  const ArrayGeometry a = build_array(Architecture::Hemispherical, {});
  const ArrayGeometry b = build_array(Architecture::Hemispherical, {});
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.elements[i].position == b.elements[i].position);
}

TEST_CASE("angle between boresight and user") {
  ElementPose e;
  auto pose_at = [](double theta, double phi) {
    ElementPose out;
    out.boresight = from_polar({1.0, theta, phi});
    out.position = 3.0 * out.boresight;
    out.polar = {3.0, theta, phi};
    return out;
  };
  GroundUser u = make_user(0.0, 0.0, 20000.0);
  e.boresight = u.direction;
  CHECK(angle_element_user(e, u) == doctest::Approx(0.0));

  // theta_k = 45, phi_k = 0 against theta_m = 45, phi_m = 180.
  u = make_user(20000.0, 0.0, 20000.0);
  CHECK(u.theta_deg == doctest::Approx(45.0));
  CHECK(angle_element_user(pose_at(45.0, 180.0), u) == doctest::Approx(90.0));

  const double x30 = 20000.0 * std::tan(deg2rad(30.0));
  u = make_user(x30, 0.0, 20000.0);
  CHECK(angle_element_user(pose_at(30.0, 0.0), u) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("triangle law distances") {
  CHECK(triangle_distance(20000.0, 3.0, 0.0) == doctest::Approx(19997.0).epsilon(1e-12));
  CHECK(triangle_distance(20000.0, 3.0, 180.0) == doctest::Approx(20003.0).epsilon(1e-12));
  CHECK(triangle_distance(20000.0, 3.0, 90.0) == doctest::Approx(std::sqrt(20000.0 * 20000.0 + 9.0)).epsilon(1e-14));
  CHECK(std::abs(triangle_distance(20000.0, 3.0, 90.0) - 20000.000225) < 1e-6);
}

TEST_CASE("element distance matches direct vector distance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-30000.0, 30000.0);
  for (Architecture a : {Architecture::Hemispherical, Architecture::Cylindrical,
                         Architecture::Rectangular, Architecture::Hybrid}) {
    const ArrayGeometry g = build_array(a, {});
    for (int t = 0; t < 5; ++t) {
      const GroundUser user = make_user(u(rng), u(rng), 20000.0);
      const Vec3 target = user.d_m * user.direction;
      for (std::size_t m = 0; m < g.size(); m += 37) {
        const double direct = (target - g.elements[m].position).norm();
        CHECK(distance_element_user(g.elements[m], user) == doctest::Approx(direct).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("user polar coordinates") {
  const GroundUser nadir = make_user(0.0, 0.0, 20000.0);
  CHECK(nadir.d_m == doctest::Approx(20000.0));
  CHECK(nadir.theta_deg == doctest::Approx(0.0));
  CHECK(nadir.elevation_deg == doctest::Approx(90.0));
  const GroundUser edge = make_user(0.0, 20000.0, 20000.0);
  CHECK(edge.theta_deg == doctest::Approx(45.0));
  CHECK(edge.phi_deg == doctest::Approx(90.0));
  CHECK(edge.elevation_deg == doctest::Approx(45.0));
}

TEST_CASE("polar round trip") {
  const Vec3 p(1.2, -0.7, -2.1);
  CHECK((from_polar(to_polar(p)) - p).norm() < 1e-12);
}

TEST_CASE("rotation about the vertical axis preserves invariants") {
  const ArrayGeometry g = build_array(Architecture::Hybrid, {});
  const ArrayGeometry r = rotated_about_z(g, 123.0);
  CHECK(check_invariants(r).empty());
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(r.elements[i].position.norm() == doctest::Approx(g.elements[i].position.norm()));
}

TEST_CASE("hemisphere covers the 60 km square with at least 64 forward elements") {
  const ArrayGeometry g = build_array(Architecture::Hemispherical, {});
  const GainPattern pattern;
  for (double x : {-30000.0, 0.0, 30000.0})
    for (double y : {-30000.0, 0.0, 30000.0}) {
      const auto row = gain_row(g, make_user(x, y, 20000.0), pattern);
      CHECK((row.array() > 0.0).count() >= 64);
    }
}

}
