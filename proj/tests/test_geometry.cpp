#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "conetrace/errors.hpp"
#include "conetrace/geometry.hpp"

using namespace conetrace;

namespace {
constexpr double kPi = 3.14159265358979323846;

double state_gap(const GeodesicState& a, const GeodesicState& b) {
  return std::max({std::abs(a.u0 - b.u0), std::abs(a.u1 - b.u1), std::abs(a.v0 - b.v0), std::abs(a.v1 - b.v1)});
}

ConnectOptions long_shots() {
  ConnectOptions o;
  o.max_length = 12.0;
  return o;
}
}  // namespace

TEST_CASE("radial path into a flat cone tip") {
  const double rho = 1.5 * kPi, a = rho / (2 * kPi), th0 = 0.8;
  const SurfaceModel cone = SurfaceModel::flat_cone(rho);
  const GeodesicPath p = geodesic_flow(cone, normalized(cone, {1.0, th0, -1.0, 0.0}), 3.0);
  REQUIRE(p.end.kind == Endpoint::Kind::Tip);
  CHECK(p.end.tip_id == 0);
  CHECK(p.length == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.end.link_point == doctest::Approx(a * th0).epsilon(1e-9));
}

TEST_CASE("flow is additive and reversible") {
  const SurfaceModel sphere = SurfaceModel::sphere();
  const GeodesicState st = normalized(sphere, {1.2, 0.3, 0.4, 0.9});
  const GeodesicPath whole = geodesic_flow(sphere, st, 2.5);
  const GeodesicPath first = geodesic_flow(sphere, st, 1.0);
  const GeodesicPath second = geodesic_flow(sphere, first.back(), 1.5);
  CHECK(state_gap(whole.back(), second.back()) <= 1e-9);

  GeodesicState back = whole.back();
  back.v0 = -back.v0;
  back.v1 = -back.v1;
  GeodesicState home = geodesic_flow(sphere, back, 2.5).back();
  home.v0 = -home.v0;
  home.v1 = -home.v1;
  CHECK(state_gap(home, st) <= 1e-7);

  const GeodesicPath r = reversed(whole);
  CHECK(r.front().u0 == doctest::Approx(whole.back().u0));
  CHECK(r.front().v0 == doctest::Approx(-whole.back().v0));
}

TEST_CASE("shots out of a flat cone tip are straight rays") {
  const double rho = 1.5 * kPi, a = rho / (2 * kPi);
  const SurfaceModel cone = SurfaceModel::flat_cone(rho);
  for (double y0 : {0.0, 1.0, 4.0}) {
    const GeodesicPath p = shoot_from_tip(cone, 0, y0, 2.0);
    CHECK(p.back().u0 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(p.back().u1 == doctest::Approx(y0 / a).epsilon(1e-9));
  }
}

TEST_CASE("tip start offset barely moves the shot") {
  const SurfaceModel ps = SurfaceModel::perturbed_spindle();
  GeometryOptions coarse, fine;
  coarse.tip_start = 1e-5;
  fine.tip_start = 1e-6;
  const GeodesicPath a = shoot_from_tip(ps, 0, 0.9, 2.0, coarse);
  const GeodesicPath b = shoot_from_tip(ps, 0, 0.9, 2.0, fine);
  CHECK(std::abs(a.back().u0 - b.back().u0) <= 1e-7);
  CHECK(std::abs(a.back().u1 - b.back().u1) <= 1e-7);
}

TEST_CASE("perturbed spindle meridian connections") {
  const SurfaceModel ps = SurfaceModel::perturbed_spindle();
  const TipConnection up = connect_tips(ps, 0, 1, 0.0, long_shots());
  const TipConnection down = connect_tips(ps, 1, 0, 2.356194490, long_shots());
  double lens[2] = {up.length, down.length};
  std::sort(lens, lens + 2);
  CHECK(lens[0] == doctest::Approx(3.036055634).epsilon(1e-8));
  CHECK(lens[1] == doctest::Approx(3.236060385).epsilon(1e-8));
  CHECK(up.path.end.kind == Endpoint::Kind::Tip);
  CHECK(up.path.end.tip_id == 1);
}

TEST_CASE("symmetric spindle tips are conjugate") {
  const SurfaceModel sp = SurfaceModel::spindle(0.75);
  try {
    connect_tips(sp, 0, 1, 0.3, long_shots());
    FAIL("expected ConjugateDegeneracy");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConjugateDegeneracy);
  }
}

TEST_CASE("miss derivative and an independent root search") {
  const SurfaceModel ps = SurfaceModel::perturbed_spindle();
  const ConnectOptions o = long_shots();
  const double y = 0.2, h = 1e-5;
  const MissEvaluation m = tip_miss(ps, 0, 1, y, o);
  REQUIRE(m.arrived);
  const double fd = (tip_miss(ps, 0, 1, y + h, o).miss - tip_miss(ps, 0, 1, y - h, o).miss) / (2 * h);
  CHECK(m.derivative == doctest::Approx(fd).epsilon(1e-4));

  // grid scan for a sign change, then bisection
  const TipConnection c = connect_tips(ps, 0, 1, 0.0, o);
  double lo = c.yA - 0.05, hi = c.yA + 0.05;
  double flo = tip_miss(ps, 0, 1, lo, o).miss;
  REQUIRE(flo * tip_miss(ps, 0, 1, hi, o).miss < 0);
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    const double fm = tip_miss(ps, 0, 1, mid, o).miss;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  CHECK(std::abs(0.5 * (lo + hi) - c.yA) <= 1e-7);
  CHECK(c.newton_derivative == doctest::Approx(tip_miss(ps, 0, 1, c.yA, o).derivative).epsilon(1e-6));
}

TEST_CASE("closed diffractive geodesics and iterates") {
  const SurfaceModel ps = SurfaceModel::perturbed_spindle();
  const std::vector<SegmentSeed> seeds{{0, 1, 0.0, 0.0}, {1, 0, 2.356194490, 0.0}};
  const DiffractiveGeodesic g1 = build_closed_diffractive(ps, seeds, 1, long_shots());
  CHECK(g1.L == doctest::Approx(6.272116020).epsilon(1e-8));
  CHECK(g1.L0 == doctest::Approx(g1.L));
  CHECK(g1.iterates == 1);
  CHECK(g1.strictly_diffractive);
  const DiffractiveGeodesic g2 = build_closed_diffractive(ps, seeds, 2, long_shots());
  CHECK(g2.iterates == 2);
  CHECK(g2.L == doctest::Approx(2 * g2.L0).epsilon(1e-12));
  CHECK(g2.L0 == doctest::Approx(g1.L0).epsilon(1e-9));
  CHECK(g2.segments.size() == 4);
}

TEST_CASE("continuation classification") {
  CHECK(classify_continuation(LinkSpectrum::circle(4 * kPi), 0.0, kPi) == Continuation::Geometric);
  CHECK(classify_continuation(LinkSpectrum::circle(3 * kPi), 0.0, 2 * kPi) == Continuation::Geometric);
  CHECK(classify_continuation(LinkSpectrum::circle(3 * kPi), 0.0, 1.0) == Continuation::StrictlyDiffractive);
  CHECK(classify_continuation(LinkSpectrum::circle(1.5 * kPi), 0.2, 0.2 + kPi) == Continuation::Geometric);
}
