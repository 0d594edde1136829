#include <doctest.h>

#include <cmath>

#include "conetrace/jacobi.hpp"

using namespace conetrace;

namespace {
constexpr double kPi = 3.14159265358979323846;

GeodesicPath equator(const SurfaceModel& s, double T, double heading = 0.0) {
  return geodesic_flow(s, normalized(s, {kPi / 2, 0.0, std::sin(heading), std::cos(heading)}), T);
}
}  // namespace

TEST_CASE("flat Jacobi fields are affine") {
  const SurfaceModel flat = SurfaceModel::flat();
  const GeodesicPath p = geodesic_flow(flat, {0.0, 0.0, 0.6, 0.8}, 3.0);
  const JacobiSolution J = integrate_jacobi(flat, p, 0.3, 0.7);
  for (double t : {0.5, 1.7, 2.9}) CHECK(J.value(t) == doctest::Approx(0.3 + 0.7 * t).epsilon(1e-10));
  CHECK(theta(flat, p) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sphere Jacobi field is a sine") {
  const SurfaceModel sphere = SurfaceModel::sphere();
  const GeodesicPath p = equator(sphere, kPi, 0.3);
  const JacobiSolution J = integrate_jacobi(sphere, p, 0.0, 1.0);
  CHECK(std::abs(J.value(0.75 * kPi)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(theta(sphere, equator(sphere, kPi / 2)) == doctest::Approx(2 / kPi).epsilon(1e-9));
  const auto [fwd, bwd] = theta_symmetric_check(sphere, equator(sphere, 2.0, -0.2));
  CHECK(fwd == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-9));
  CHECK(bwd == doctest::Approx(fwd).epsilon(1e-9));
}

TEST_CASE("b-Jacobi field out of a tip") {
  const SurfaceModel cone = SurfaceModel::flat_cone(1.5 * kPi);
  for (double d : {0.5, 2.0, 4.5}) {
    const GeodesicPath p = shoot_from_tip(cone, 0, 0.7, d);
    CHECK(b_jacobi_from_tip(cone, p).at_end() == doctest::Approx(d).epsilon(1e-9));
    CHECK(theta(cone, p) == doctest::Approx(1.0).epsilon(1e-9));
  }
  const SurfaceModel spindle = SurfaceModel::spindle(0.75);
  const GeodesicPath near = shoot_from_tip(spindle, 0, 1.0, 0.01);
  CHECK(b_jacobi_from_tip(spindle, near).at_end() / 0.01 == doctest::Approx(1.0).epsilon(1e-4));
  const GeodesicPath far = shoot_from_tip(spindle, 0, 1.0, 1.0);
  CHECK(b_jacobi_from_tip(spindle, far).at_end() == doctest::Approx(std::sin(1.0)).epsilon(1e-8));
}

TEST_CASE("Morse index counts conjugate points") {
  const SurfaceModel sphere = SurfaceModel::sphere();
  CHECK(morse_index(sphere, equator(sphere, 1.0)) == 0);
  CHECK(morse_index(sphere, equator(sphere, 1.5 * kPi)) == 1);
  CHECK(morse_index(sphere, equator(sphere, 2.5 * kPi, 0.4)) == 2);
  const auto cp = conjugate_points(sphere, equator(sphere, 2.5 * kPi, 0.4));
  REQUIRE(cp.size() == 2);
  CHECK(cp[0] == doctest::Approx(kPi).epsilon(1e-8));
  CHECK(cp[1] == doctest::Approx(2 * kPi).epsilon(1e-8));
}

TEST_CASE("broken Hessian index") {
  const SurfaceModel sphere = SurfaceModel::sphere();
  auto split = [&](double T, double S) {
    const GeodesicPath leg1 = equator(sphere, S);
    const GeodesicPath leg2 = geodesic_flow(sphere, leg1.back(), T - S);
    return broken_hessian_index(sphere, leg1, leg2);
  };
  CHECK(split(1.0, 0.5) == 0);
  CHECK(split(1.5 * kPi, 0.75 * kPi) == 1);
  CHECK(split(1.5 * kPi, 1.25 * kPi) == 0);
  // flat: dist(z1, w) + dist(w, z2) is convex across the segment
  const SurfaceModel flat = SurfaceModel::flat();
  const GeodesicPath a = geodesic_flow(flat, {0, 0, 1, 0}, 1.0);
  const GeodesicPath b = geodesic_flow(flat, a.back(), 2.0);
  CHECK(broken_hessian(flat, a, b) == doctest::Approx(1.0 + 0.5).epsilon(1e-9));
}

TEST_CASE("Jacobi field matches the exponential map") {
  const SurfaceModel sphere = SurfaceModel::sphere();
  const double T = 2.2, h = 1e-6;
  auto end_r = [&](double heading) { return equator(sphere, T, heading).back().u0; };
  const double fd = (end_r(h) - end_r(-h)) / (2 * h);
  const JacobiSolution J = integrate_jacobi(sphere, equator(sphere, T), 0.0, 1.0);
  CHECK(std::abs(std::abs(fd) - std::abs(J.value(T))) <= 1e-4);
}

TEST_CASE("Wronskian is conserved and invariants are assembled") {
  const SurfaceModel sphere = SurfaceModel::sphere();
  const GeodesicPath p = equator(sphere, 4.0, 0.3);
  CHECK(wronskian_drift(sphere, p) <= 1e-8);
  const SegmentInvariants inv = segment_invariants(sphere, p);
  CHECK(inv.length == doctest::Approx(4.0));
  CHECK(inv.morse_index == 1);
  CHECK(inv.theta == doctest::Approx(std::abs(std::sin(4.0)) / 4.0).epsilon(1e-9));
}
